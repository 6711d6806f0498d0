use std::collections::BTreeSet;

use num_complex::Complex64;

use super::{CycleWeightSpec, ZetaError};
use crate::billiard::{enumerate_words, OrbitRecord};

/// A prime cycle as it enters the expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeCycle {
    pub record: OrbitRecord,
    /// Sign of `t_p`, including the band factor `sign(Λ_p)^k`.
    pub sign: f64,
    /// `log(|Λ_p|^{−1/2−k})`.
    pub log_amplitude: f64,
}

/// A set of distinct primes contributing `(−1)^{#set} Π t_p` to `1/ζ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoCycle {
    /// Indices into [`CycleExpansion::primes`], increasing.
    pub members: Vec<usize>,
    /// Total symbol length `Σ n_p`.
    pub order: usize,
    /// `(−1)^{#set}` times the product of the prime signs.
    pub sign: f64,
    pub length: f64,
    pub log_amplitude: f64,
}

impl PseudoCycle {
    pub fn term(&self, lambda: Complex64) -> Complex64 {
        self.sign * (-lambda * self.length + self.log_amplitude).exp()
    }
}

/// `1/ζ_k(λ)` and its λ-derivative at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub d_lambda: Complex64,
}

/// Truncated expansion `1/ζ_k(λ) = Σ_S (−1)^{#S} Π_{p∈S} t_p(λ)` over all
/// sets `S` of distinct primes with total symbol length at most `order`.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleExpansion {
    spec: CycleWeightSpec,
    order: usize,
    primes: Vec<PrimeCycle>,
    pseudo_cycles: Vec<PseudoCycle>,
}

/// Builds the order-`order` expansion from a prime orbit set. Orbits longer
/// than `order` are ignored; every prime word up to `order` must be present.
pub fn build_expansion(
    orbits: &[OrbitRecord],
    spec: CycleWeightSpec,
    order: usize,
) -> Result<CycleExpansion, ZetaError> {
    let available: BTreeSet<String> = orbits.iter().map(|o| o.word.to_string()).collect();
    let missing: Vec<String> = enumerate_words(order)
        .iter()
        .map(|w| w.to_string())
        .filter(|w| !available.contains(w))
        .collect();
    if let Some(first) = missing.first() {
        return Err(ZetaError::MissingOrbits {
            first: first.clone(),
            missing,
        });
    }
    let mut selected: Vec<&OrbitRecord> =
        orbits.iter().filter(|o| o.n_reflections <= order).collect();
    selected.sort_by(|a, b| {
        a.n_reflections
            .cmp(&b.n_reflections)
            .then_with(|| a.word.cmp(&b.word))
    });
    selected.dedup_by(|a, b| a.word == b.word);
    let primes: Vec<PrimeCycle> = selected
        .into_iter()
        .map(|o| PrimeCycle {
            record: o.clone(),
            sign: spec.sign(o),
            log_amplitude: spec.log_amplitude(o),
        })
        .collect();
    Ok(CycleExpansion::with_primes(spec, order, primes))
}

impl CycleExpansion {
    /// Expansion over an explicit prime list; pseudo-cycles follow the list order.
    pub fn with_primes(spec: CycleWeightSpec, order: usize, primes: Vec<PrimeCycle>) -> Self {
        let mut pseudo_cycles = Vec::new();
        let mut stack = Vec::new();
        collect(&primes, order, 0, &mut stack, &mut pseudo_cycles);
        Self {
            spec,
            order,
            primes,
            pseudo_cycles,
        }
    }

    /// An expansion with no primes: `1/ζ ≡ 1`.
    pub fn empty(spec: CycleWeightSpec) -> Self {
        Self::with_primes(spec, 0, Vec::new())
    }

    pub fn spec(&self) -> CycleWeightSpec {
        self.spec
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn primes(&self) -> &[PrimeCycle] {
        &self.primes
    }

    pub fn pseudo_cycles(&self) -> &[PseudoCycle] {
        &self.pseudo_cycles
    }

    /// Mean prime length, which sets the expected resonance spacing `2π/⟨L⟩`.
    pub fn mean_length(&self) -> Option<f64> {
        (!self.primes.is_empty()).then(|| {
            self.primes.iter().map(|p| p.record.length).sum::<f64>() / self.primes.len() as f64
        })
    }

    pub fn eval(&self, lambda: Complex64) -> Evaluation {
        let mut value = Complex64::new(0.0, 0.0);
        let mut d_lambda = Complex64::new(0.0, 0.0);
        for s in &self.pseudo_cycles {
            let term = s.term(lambda);
            value += term;
            d_lambda -= term * s.length;
        }
        Evaluation { value, d_lambda }
    }

    /// `1/ζ_k(λ, ε)` with every `t_p` multiplied by `e^{ε A_p}`.
    pub fn eval_weighted(
        &self,
        lambda: Complex64,
        weights: &[f64],
        epsilon: f64,
    ) -> Result<Complex64, ZetaError> {
        self.check_weights(weights)?;
        Ok(self
            .pseudo_cycles
            .iter()
            .map(|s| {
                s.term(lambda)
                    * (epsilon * s.members.iter().map(|&p| weights[p]).sum::<f64>()).exp()
            })
            .sum())
    }

    /// Derivative in `ε` at `ε = 0` when every `t_p` carries `e^{ε A_p}`.
    pub fn weight_derivative(
        &self,
        lambda: Complex64,
        weights: &[f64],
    ) -> Result<Complex64, ZetaError> {
        self.check_weights(weights)?;
        Ok(self
            .pseudo_cycles
            .iter()
            .map(|s| s.term(lambda) * s.members.iter().map(|&p| weights[p]).sum::<f64>())
            .sum())
    }

    /// For every prime `p`, the sum of the terms of the pseudo-cycles that
    /// contain it. `∂_ε D = Σ_p A_p · member_sums[p]`.
    pub fn member_sums(&self, lambda: Complex64) -> Vec<Complex64> {
        let mut sums = vec![Complex64::new(0.0, 0.0); self.primes.len()];
        for s in &self.pseudo_cycles {
            let term = s.term(lambda);
            for &p in &s.members {
                sums[p] += term;
            }
        }
        sums
    }

    /// Sum of the terms of total symbol length exactly `n`.
    pub fn curvature(&self, n: usize, lambda: Complex64) -> Complex64 {
        self.pseudo_cycles
            .iter()
            .filter(|s| s.order == n)
            .map(|s| s.term(lambda))
            .sum()
    }

    pub(crate) fn check_weights(&self, weights: &[f64]) -> Result<(), ZetaError> {
        if weights.len() < self.primes.len() {
            return Err(ZetaError::MissingWeight {
                prime: self.primes[weights.len()].record.word.to_string(),
            });
        }
        Ok(())
    }

    /// Weight vector aligned with [`Self::primes`] from a lookup by word.
    pub fn weights_from<F>(&self, mut lookup: F) -> Result<Vec<f64>, ZetaError>
    where
        F: FnMut(&OrbitRecord) -> Option<f64>,
    {
        self.primes
            .iter()
            .map(|p| {
                lookup(&p.record).ok_or_else(|| ZetaError::MissingWeight {
                    prime: p.record.word.to_string(),
                })
            })
            .collect()
    }
}

fn collect(
    primes: &[PrimeCycle],
    budget: usize,
    start: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<PseudoCycle>,
) {
    let mut sign = if stack.len().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let mut length = 0.0;
    let mut log_amplitude = 0.0;
    let mut order = 0;
    for &p in stack.iter() {
        sign *= primes[p].sign;
        length += primes[p].record.length;
        log_amplitude += primes[p].log_amplitude;
        order += primes[p].record.n_reflections;
    }
    out.push(PseudoCycle {
        members: stack.clone(),
        order,
        sign,
        length,
        log_amplitude,
    });
    for p in start..primes.len() {
        let n = primes[p].record.n_reflections;
        if n <= budget {
            stack.push(p);
            collect(primes, budget - n, p + 1, stack, out);
            stack.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::billiard::{solve_all, DiskSystem};
    use crate::zeta::Representation;

    fn records(ratio: f64, n: usize) -> Vec<OrbitRecord> {
        solve_all(&DiskSystem::new(ratio).unwrap(), n)
            .unwrap()
            .iter()
            .map(OrbitRecord::from)
            .collect()
    }

    fn spec() -> CycleWeightSpec {
        CycleWeightSpec::new(Representation::A2, true, 0)
    }

    #[test]
    fn fundamental_truncation() {
        let orbits = records(6.0, 1);
        let exp = build_expansion(&orbits, spec(), 1).unwrap();
        let lambda = Complex64::new(0.3, 2.0);
        let t: Vec<Complex64> = orbits.iter().map(|o| spec().weight(o, lambda)).collect();
        let expected = 1.0 - t[0] - t[1];
        assert!((exp.eval(lambda).value - expected).norm() < 1e-14);
    }

    #[test]
    fn curvature_correction_at_order_two() {
        let orbits = records(6.0, 2);
        let exp = build_expansion(&orbits, spec(), 2).unwrap();
        assert_eq!(exp.pseudo_cycles().len(), 5);
        let lambda = Complex64::new(0.1, -1.3);
        let t: Vec<Complex64> = orbits.iter().map(|o| spec().weight(o, lambda)).collect();
        let expected = 1.0 - t[0] - t[1] - (t[2] - t[0] * t[1]);
        assert!((exp.eval(lambda).value - expected).norm() < 1e-14);
    }

    #[test]
    fn missing_orbits_are_reported() {
        let mut orbits = records(6.0, 3);
        orbits.retain(|o| o.word.to_string() != "011");
        match build_expansion(&orbits, spec(), 3) {
            Err(ZetaError::MissingOrbits { first, .. }) => assert_eq!(first, "011"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_expansion_is_one() {
        let exp = CycleExpansion::empty(spec());
        for lambda in [Complex64::new(0.0, 0.0), Complex64::new(-3.0, 40.0)] {
            let e = exp.eval(lambda);
            assert_eq!(e.value, Complex64::new(1.0, 0.0));
            assert_eq!(e.d_lambda, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn approaches_one_for_large_real_lambda() {
        let exp = build_expansion(&records(6.0, 1), spec(), 1).unwrap();
        let mut last = f64::INFINITY;
        for x in [1.0, 2.0, 4.0, 8.0, 16.0] {
            let gap = (exp.eval(Complex64::new(x, 0.0)).value - 1.0).norm();
            assert!(gap < last);
            last = gap;
        }
        assert!(last < 1e-20);
    }

    #[test]
    fn missing_weight_is_reported() {
        let exp = build_expansion(&records(6.0, 2), spec(), 2).unwrap();
        assert!(matches!(
            exp.weight_derivative(Complex64::new(0.0, 1.0), &[1.0, 2.0]),
            Err(ZetaError::MissingWeight { .. })
        ));
    }
}
