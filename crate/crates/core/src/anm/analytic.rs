//! Closed-form population quantities of linear ANMs.

use nalgebra::DMatrix;

use super::{AnmInstance, WeightDist};
use crate::error::{Error, Result};

/// Total causal effects `T = (Id − W)⁻¹`: `T[(i, j)]` sums the weight
/// products over all directed paths `i → … → j`, with `T[(i, i)] = 1`.
pub fn total_effects(inst: &AnmInstance) -> DMatrix<f64> {
    let d = inst.d();
    let g = inst.dag();
    let w = inst.weights();
    let order = g.topological_order();
    let mut t = DMatrix::identity(d, d);
    for &j in &order {
        for &p in g.parents(j) {
            let wpj = w[(p, j)];
            for i in 0..d {
                let tip = t[(i, p)];
                if tip != 0.0 {
                    t[(i, j)] += tip * wpj;
                }
            }
        }
    }
    t
}

/// Population covariance `(Id − Wᵀ)⁻¹ diag(σ²) (Id − W)⁻¹`.
pub fn analytic_covariance(inst: &AnmInstance) -> DMatrix<f64> {
    let t = total_effects(inst);
    let var = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(inst.d(), inst.sigma().iter().map(|s| s * s)));
    let cov = t.transpose() * var * &t;
    // exact symmetry
    (&cov + cov.transpose()) * 0.5
}

/// `E[ln|V|]` for `V ~ Unif((-a, -b) ∪ (b, a))`:
/// `(a ln a − a − b ln b + b) / (a − b)`.
pub fn expected_log_abs_weight(wdist: &WeightDist) -> f64 {
    let (b, a) = (wdist.lo(), wdist.hi());
    if a == b {
        return a.ln();
    }
    (a * a.ln() - a - b * b.ln() + b) / (a - b)
}

/// Outer bound `a` such that `E[ln|V|] = target` for `V ~ Unif(±(inner, a))`.
///
/// The map `a ↦ E[ln|V|]` is continuous and increasing with infimum `ln(inner)`,
/// so bisection applies to every `target > ln(inner)`.
pub fn solve_alpha_for_target(target: f64, inner: f64) -> Result<f64> {
    if !(inner > 0.0 && inner.is_finite()) {
        return Err(Error::invalid(format!("inner bound must be positive, got {inner}")));
    }
    if !target.is_finite() || target <= inner.ln() {
        return Err(Error::invalid(format!(
            "E[ln|V|] = {target} is unattainable with inner bound {inner} (needs > {})",
            inner.ln()
        )));
    }
    let f = |a: f64| expected_log_abs_weight(&WeightDist { lo: inner, hi: a });
    let mut lo = inner;
    let mut hi = inner * 2.0;
    while f(hi) < target {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::invalid(format!("E[ln|V|] = {target} is out of floating-point range")));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `σ₀² Σⱼ ln|wⱼ|`, a lower bound on the terminal variance of a chain with
/// edge weights `weights` and root noise standard deviation `sigma0`.
pub fn chain_variance_lower_bound(weights: &[f64], sigma0: f64) -> Result<f64> {
    if weights.is_empty() {
        return Err(Error::invalid("chain needs at least one edge weight"));
    }
    if !(sigma0 > 0.0) {
        return Err(Error::invalid(format!("sigma0 must be positive, got {sigma0}")));
    }
    if let Some(k) = weights.iter().position(|&w| w == 0.0 || !w.is_finite()) {
        return Err(Error::invalid(format!("edge weight {k} is zero or not finite")));
    }
    Ok(sigma0 * sigma0 * weights.iter().map(|w| w.abs().ln()).sum::<f64>())
}

/// Exact variance of every node along a chain, via
/// `Var(X₀) = σ₀²`, `Var(X_{k+1}) = w_k² Var(X_k) + σ_{k+1}²`.
///
/// `sigmas` has one more entry than `weights`.
pub fn chain_terminal_variance(weights: &[f64], sigmas: &[f64]) -> Result<Vec<f64>> {
    if sigmas.len() != weights.len() + 1 {
        return Err(Error::DimensionMismatch { expected: weights.len() + 1, found: sigmas.len() });
    }
    let mut out = Vec::with_capacity(sigmas.len());
    let mut v = sigmas[0] * sigmas[0];
    out.push(v);
    for (w, s) in weights.iter().zip(&sigmas[1..]) {
        v = w * w * v + s * s;
        out.push(v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anm::NoiseFamily;
    use crate::graphs::Dag;

    #[test]
    fn reported_log_weight_values() {
        let high = expected_log_abs_weight(&WeightDist::new(0.5, 2.0).unwrap());
        let low = expected_log_abs_weight(&WeightDist::new(0.1, 0.5).unwrap());
        assert!((high - 0.16).abs() < 0.01, "{high}");
        assert!((low + 1.29).abs() < 0.01, "{low}");
    }

    #[test]
    fn solve_alpha_inverts_the_closed_form() {
        let target = expected_log_abs_weight(&WeightDist::new(0.5, 2.0).unwrap());
        let a = solve_alpha_for_target(target, 0.5).unwrap();
        assert!((a - 2.0).abs() < 1e-6);
        for t in [-1.0, 0.0, 0.5, 1.5, 2.5] {
            let a = solve_alpha_for_target(t, 0.1).unwrap();
            let back = expected_log_abs_weight(&WeightDist::new(0.1, a).unwrap());
            assert!((back - t).abs() < 1e-6);
        }
        // just above the infimum, the bound collapses toward the inner bound
        let a = solve_alpha_for_target(0.1f64.ln() + 1e-6, 0.1).unwrap();
        assert!(a > 0.1 && a < 0.1001);
        assert!(solve_alpha_for_target(0.1f64.ln(), 0.1).is_err());
        assert!(solve_alpha_for_target(-5.0, 0.1).is_err());
    }

    #[test]
    fn chain_bounds() {
        assert_eq!(chain_variance_lower_bound(&[1.0, 1.0], 1.0).unwrap(), 0.0);
        let b = chain_variance_lower_bound(&[2.0, 2.0], 1.0).unwrap();
        assert!((b - 2.0 * 2f64.ln()).abs() < 1e-12);
        let exact = chain_terminal_variance(&[2.0, 2.0], &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(exact, vec![1.0, 5.0, 21.0]);
        assert!(exact[2] >= b);
        assert!(chain_variance_lower_bound(&[0.0], 1.0).is_err());
        assert!(chain_variance_lower_bound(&[], 1.0).is_err());
    }

    #[test]
    fn covariance_of_pure_noise_is_diagonal() {
        let inst =
            AnmInstance::new(Dag::empty(3), DMatrix::zeros(3, 3), vec![0.5, 1.0, 2.0], NoiseFamily::Gaussian).unwrap();
        let cov = analytic_covariance(&inst);
        assert_eq!(cov, DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.25, 1.0, 4.0])));
    }

    #[test]
    fn unit_chain_variances_grow_linearly() {
        let d = 5;
        let mut w = DMatrix::zeros(d, d);
        for t in 1..d {
            w[(t - 1, t)] = 1.0;
        }
        let inst = AnmInstance::new(Dag::chain(d), w, vec![1.0; d], NoiseFamily::Gaussian).unwrap();
        let cov = analytic_covariance(&inst);
        for p in 0..d {
            assert!((cov[(p, p)] - (p + 1) as f64).abs() < 1e-12);
        }
    }
}
