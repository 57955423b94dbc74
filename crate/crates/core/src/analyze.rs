//! Walk diagnostics: variance, modularity, asymmetry and distribution distance.

use serde::{Deserialize, Serialize};

use crate::circuit::Flavor;
use crate::error::{Result, WalkError};
use crate::state::{Distribution, StateVector};
use crate::walk::{build_step, WalkSpec};

/// Asymptotic `σ²/t²` of the Hadamard walk, `(√2 − 1)/2`.
pub fn variance_constant() -> f64 {
    (std::f64::consts::SQRT_2 - 1.0) / 2.0
}

pub fn theoretical_variance(t: usize) -> f64 {
    variance_constant() * (t * t) as f64
}

/// Unwraps a cycle position into `(−N/2, N/2]`.
pub fn signed_displacement(position: usize, n_states: usize) -> i64 {
    let (p, n) = (position as i64, n_states as i64);
    if 2 * p <= n {
        p
    } else {
        p - n
    }
}

pub fn mean_displacement(dist: &Distribution) -> f64 {
    let n = dist.len();
    dist.nonzero(0.0).map(|(k, p)| p * signed_displacement(k, n) as f64).sum()
}

/// Variance of the signed displacement.
pub fn variance(dist: &Distribution) -> f64 {
    let n = dist.len();
    let mean = mean_displacement(dist);
    dist.nonzero(0.0)
        .map(|(k, p)| {
            let d = signed_displacement(k, n) as f64 - mean;
            p * d * d
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularityCheck {
    pub holds: bool,
    /// Supported states with the wrong parity.
    pub violating: Vec<usize>,
    pub support_size: usize,
}

/// After `t` steps from `start`, only positions of parity `(start + t) mod 2`
/// may carry weight, and at most `N/2` of them.
pub fn check_modularity(dist: &Distribution, t: usize, start: usize, tol: f64) -> ModularityCheck {
    let parity = (start + t) % 2;
    let support = dist.support(tol);
    let violating: Vec<usize> = support.iter().copied().filter(|k| k % 2 != parity).collect();
    let holds = violating.is_empty() && support.len() <= (dist.len() / 2).max(1);
    ModularityCheck { holds, violating, support_size: support.len() }
}

/// Half the L1 distance. Positions missing from the shorter distribution count as zero.
pub fn total_variation(a: &Distribution, b: &Distribution) -> f64 {
    let n = a.len().max(b.len());
    0.5 * (0..n).map(|k| (a.get(k) - b.get(k)).abs()).sum::<f64>()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceSeries {
    pub n: usize,
    pub flavor: Flavor,
    /// Exact simulated variance for `t = 0..=t_max`.
    pub simulated: Vec<f64>,
    pub theoretical: Vec<f64>,
}

impl VarianceSeries {
    pub fn t_max(&self) -> usize {
        self.simulated.len() - 1
    }

    /// Mean of `σ²(t)/t²` over `lo..=hi`.
    pub fn mean_ratio(&self, lo: usize, hi: usize) -> f64 {
        let ts = lo.max(1)..=hi.min(self.t_max());
        let count = ts.clone().count() as f64;
        ts.map(|t| self.simulated[t] / (t * t) as f64).sum::<f64>() / count
    }
}

/// Exact variance after every step from 0 to `t_max`, walker starting at 0.
/// `t_max` must stay below `N/2` so the two wavefronts never meet across the cycle.
pub fn variance_sweep(n: usize, t_max: usize, flavor: Flavor) -> Result<VarianceSeries> {
    let spec = WalkSpec::new(n, t_max, flavor);
    spec.validate()?;
    if 2 * t_max >= spec.positions() {
        return Err(WalkError::Parameter(format!(
            "t_max = {t_max} must be below N/2 = {}",
            spec.positions() / 2
        )));
    }
    let step = build_step(n, flavor);
    let mut state = StateVector::init(spec.layout(), 0)?;
    let mut simulated = Vec::with_capacity(t_max + 1);
    simulated.push(variance(&state.measure_distribution()));
    for _ in 0..t_max {
        state.apply_circuit(&step)?;
        simulated.push(variance(&state.measure_distribution()));
    }
    let theoretical = (0..=t_max).map(theoretical_variance).collect();
    Ok(VarianceSeries { n, flavor, simulated, theoretical })
}
