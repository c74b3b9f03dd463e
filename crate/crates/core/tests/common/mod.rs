//! Reference implementations shared by the integration tests.
//!
//! Everything here is deliberately naive: explicit path enumeration, plain
//! loops and hand-rolled rationals, so it shares no code with the library.

#![allow(dead_code)]

use std::collections::BTreeMap;

use r2sort::Dag;
use rand::Rng;

/// Child lists from an edge list.
pub fn children(d: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut ch = vec![Vec::new(); d];
    for &(s, t) in edges {
        ch[s].push(t);
    }
    ch
}

/// `(s, t) → (length → number of directed paths)`, by depth-first enumeration.
pub fn enumerate_paths(g: &Dag) -> BTreeMap<(usize, usize), BTreeMap<usize, u128>> {
    let ch = children(g.d(), &g.edges());
    let mut out: BTreeMap<(usize, usize), BTreeMap<usize, u128>> = BTreeMap::new();
    fn walk(
        ch: &[Vec<usize>],
        start: usize,
        v: usize,
        len: usize,
        out: &mut BTreeMap<(usize, usize), BTreeMap<usize, u128>>,
    ) {
        for &c in &ch[v] {
            *out.entry((start, c)).or_default().entry(len + 1).or_default() += 1;
            walk(ch, start, c, len + 1, out);
        }
    }
    for s in 0..g.d() {
        walk(&ch, s, s, 0, &mut out);
    }
    out
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Reduced `num / den`.
pub fn reduce(num: u128, den: u128) -> (u128, u128) {
    let g = gcd(num, den).max(1);
    (num / g, den / g)
}

/// Sortability as a reduced fraction, straight from enumerated paths.
/// `weighting`: 0 unique length, 1 path existence, 2 path count.
pub fn brute_sortability(tau: &[f64], g: &Dag, weighting: u8) -> Option<(u128, u128)> {
    let mut num = 0u128; // in halves
    let mut den = 0u128;
    for (&(s, t), lengths) in &enumerate_paths(g) {
        let score = if tau[s] < tau[t] {
            2
        } else if tau[s] == tau[t] {
            1
        } else {
            0
        };
        let weight: u128 = match weighting {
            0 => lengths.len() as u128,
            1 => 1,
            _ => lengths.values().sum(),
        };
        num += score * weight;
        den += 2 * weight;
    }
    (den > 0).then(|| reduce(num, den))
}

/// Every labelled DAG on `d` nodes, by filtering all off-diagonal adjacency patterns.
pub fn all_dags(d: usize) -> Vec<Dag> {
    let slots: Vec<(usize, usize)> = (0..d).flat_map(|s| (0..d).map(move |t| (s, t))).filter(|(s, t)| s != t).collect();
    (0u64..1 << slots.len())
        .filter_map(|mask| {
            let edges: Vec<(usize, usize)> =
                slots.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect();
            Dag::from_edges(d, &edges).ok()
        })
        .collect()
}

/// Random DAG: each forward pair of a random permutation is an edge with probability `p`.
pub fn random_dag<R: Rng>(d: usize, p: f64, rng: &mut R) -> Dag {
    let mut perm: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let mut edges = Vec::new();
    for a in 0..d {
        for b in a + 1..d {
            if rng.random_bool(p) {
                edges.push((perm[a], perm[b]));
            }
        }
    }
    Dag::from_edges(d, &edges).unwrap()
}

/// Descendants of `v` including `v`.
pub fn descendants_incl(g: &Dag, v: usize) -> Vec<bool> {
    let mut seen = vec![false; g.d()];
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        if !std::mem::replace(&mut seen[u], true) {
            stack.extend(g.children(u).iter().copied());
        }
    }
    seen
}

/// d-separation by enumerating every simple path in the skeleton.
pub fn brute_d_separated(g: &Dag, i: usize, j: usize, z: &[usize]) -> bool {
    let d = g.d();
    let in_z: Vec<bool> = (0..d).map(|v| z.contains(&v)).collect();
    let desc: Vec<Vec<bool>> = (0..d).map(|v| descendants_incl(g, v)).collect();
    let neighbours: Vec<Vec<usize>> =
        (0..d).map(|v| g.parents(v).iter().chain(g.children(v)).copied().collect()).collect();

    fn open(g: &Dag, path: &[usize], in_z: &[bool], desc: &[Vec<bool>]) -> bool {
        for k in 1..path.len() - 1 {
            let (a, m, b) = (path[k - 1], path[k], path[k + 1]);
            let collider = g.has_edge(a, m) && g.has_edge(b, m);
            if collider {
                if !(0..in_z.len()).any(|w| in_z[w] && desc[m][w]) {
                    return false;
                }
            } else if in_z[m] {
                return false;
            }
        }
        true
    }

    fn search(
        g: &Dag,
        path: &mut Vec<usize>,
        target: usize,
        nb: &[Vec<usize>],
        in_z: &[bool],
        desc: &[Vec<bool>],
    ) -> bool {
        let v = *path.last().unwrap();
        if v == target {
            return open(g, path, in_z, desc);
        }
        for &u in &nb[v] {
            if !path.contains(&u) {
                path.push(u);
                let found = search(g, path, target, nb, in_z, desc);
                path.pop();
                if found {
                    return true;
                }
            }
        }
        false
    }

    !search(g, &mut vec![i], j, &neighbours, &in_z, &desc)
}

/// Adaptive Simpson quadrature.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + rec(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    rec(f, a, fa, b, fb, m, fm, whole, tol, 50)
}
