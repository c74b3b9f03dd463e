use std::collections::VecDeque;

use super::Dag;
use crate::error::{Error, Result};

/// Whether `i` and `j` are d-separated by `z` in `g`.
///
/// Reachability ("Bayes ball") over `(node, direction)` states: a trail may
/// pass a non-collider only if it is outside `z`, and a collider only if it
/// is in `z` or has a descendant in `z`.
pub fn d_separated(g: &Dag, i: usize, j: usize, z: &[usize]) -> Result<bool> {
    let d = g.d();
    if i >= d || j >= d || z.iter().any(|&v| v >= d) {
        return Err(Error::invalid("node index out of range"));
    }
    if i == j {
        return Err(Error::invalid("d-separation needs two distinct nodes"));
    }
    if z.contains(&i) || z.contains(&j) {
        return Err(Error::invalid("conditioning set must not contain the queried nodes"));
    }
    Ok(!reachable(g, i, z)[j])
}

/// Nodes d-connected to `source` given `z`.
pub(crate) fn reachable(g: &Dag, source: usize, z: &[usize]) -> Vec<bool> {
    let d = g.d();
    let mut in_z = vec![false; d];
    for &v in z {
        in_z[v] = true;
    }
    // nodes that are in z or have a descendant in z
    let mut opens_collider = vec![false; d];
    let mut stack: Vec<usize> = z.to_vec();
    while let Some(v) = stack.pop() {
        if !opens_collider[v] {
            opens_collider[v] = true;
            stack.extend_from_slice(g.parents(v));
        }
    }

    const UP: usize = 0; // arrived from a child
    const DOWN: usize = 1; // arrived from a parent
    let mut visited = vec![[false; 2]; d];
    let mut reached = vec![false; d];
    let mut queue = VecDeque::from([(source, UP)]);
    while let Some((v, dir)) = queue.pop_front() {
        if visited[v][dir] {
            continue;
        }
        visited[v][dir] = true;
        if !in_z[v] {
            reached[v] = true;
        }
        if dir == UP && !in_z[v] {
            queue.extend(g.parents(v).iter().map(|&p| (p, UP)));
            queue.extend(g.children(v).iter().map(|&c| (c, DOWN)));
        } else if dir == DOWN {
            if !in_z[v] {
                queue.extend(g.children(v).iter().map(|&c| (c, DOWN)));
            }
            if opens_collider[v] {
                queue.extend(g.parents(v).iter().map(|&p| (p, UP)));
            }
        }
    }
    reached[source] = false;
    reached
}
