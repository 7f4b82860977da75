//! Exact matrix-free evolution under `U = S C` and the Cesàro oracle.

use log::debug;
use num_complex::Complex64;

use crate::coin::{apply_coin_in_place, CoinSpec};
use crate::distribution::{Distribution, Provenance};
use crate::state::{vertex_weights, StateVector};
use crate::{Error, Result, NORM_TOL};

/// Flip-flop shift: `|x,R> -> |x+1,L>`, `|x,L> -> |x-1,R>`.
pub fn apply_shift(state: &StateVector) -> StateVector {
    let mut out = state.clone();
    shift_in_place(out.amplitudes_mut());
    out
}

// in the arc ordering S swaps offsets (2k, 2k+1)
fn shift_in_place(amps: &mut [Complex64]) {
    for pair in amps.chunks_exact_mut(2) {
        pair.swap(0, 1);
    }
}

/// One step `S(C(state))`.
pub fn step(spec: &CoinSpec, state: &StateVector) -> Result<StateVector> {
    state.check_size(spec.size())?;
    let mut out = state.clone();
    step_in_place(spec, out.amplitudes_mut());
    Ok(out)
}

pub(crate) fn step_in_place(spec: &CoinSpec, amps: &mut [Complex64]) {
    apply_coin_in_place(spec, amps);
    shift_in_place(amps);
}

/// Applies `U^t`.
pub fn evolve(spec: &CoinSpec, state: &StateVector, t: usize) -> Result<StateVector> {
    state.check_size(spec.size())?;
    let mut out = state.clone();
    for _ in 0..t {
        step_in_place(spec, out.amplitudes_mut());
    }
    Ok(out)
}

/// Position distribution at one time step.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionRecord {
    pub t: usize,
    pub distribution: Distribution,
}

/// Iterator over `(t, P(X_t = .))` for `t = 0, 1, 2, ...`.
pub struct Walk<'a> {
    spec: &'a CoinSpec,
    state: StateVector,
    t: usize,
}

impl<'a> Walk<'a> {
    pub fn new(spec: &'a CoinSpec, initial: StateVector) -> Result<Self> {
        initial.check_size(spec.size())?;
        check_unit(&initial)?;
        Ok(Walk {
            spec,
            state: initial,
            t: 0,
        })
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }
}

impl Iterator for Walk<'_> {
    type Item = EvolutionRecord;

    fn next(&mut self) -> Option<EvolutionRecord> {
        let distribution = Distribution::new(self.state.vertex_weights(), Provenance::Marginal).ok()?;
        let record = EvolutionRecord {
            t: self.t,
            distribution,
        };
        step_in_place(self.spec, self.state.amplitudes_mut());
        self.t += 1;
        Some(record)
    }
}

fn check_unit(state: &StateVector) -> Result<()> {
    let norm = state.norm();
    if (norm * norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

/// Compensated running sums, one per vertex.
struct KahanSums {
    sum: Vec<f64>,
    carry: Vec<f64>,
}

impl KahanSums {
    fn new(len: usize) -> Self {
        KahanSums {
            sum: vec![0.0; len],
            carry: vec![0.0; len],
        }
    }

    fn add(&mut self, values: &[f64]) {
        for ((s, c), &v) in self.sum.iter_mut().zip(&mut self.carry).zip(values) {
            let y = v - *c;
            let t = *s + y;
            *c = (t - *s) - y;
            *s = t;
        }
    }

    fn mean(&self, count: usize) -> Vec<f64> {
        self.sum.iter().map(|s| s / count as f64).collect()
    }
}

/// `(1/T) sum_{t<T} P(X_t = x)` by direct evolution.
pub fn cesaro_average(spec: &CoinSpec, initial: &StateVector, steps: usize) -> Result<Distribution> {
    if steps == 0 {
        return Err(Error::ZeroSteps);
    }
    initial.check_size(spec.size())?;
    check_unit(initial)?;
    let size = spec.size();
    let mut amps = initial.amplitudes().to_vec();
    let mut acc = KahanSums::new(size.vertices());
    for _ in 0..steps {
        acc.add(&vertex_weights(size, &amps));
        step_in_place(spec, &mut amps);
    }
    Distribution::new(acc.mean(steps), Provenance::Cesaro)
}

/// Cesàro averages at `T` and `2T` with the fitted constant `C` such that
/// their sup-norm distance is `C / T`.
#[derive(Debug, Clone)]
pub struct CesaroReport {
    pub steps: usize,
    pub average: Distribution,
    pub doubled: Distribution,
    pub sup_diff: f64,
    pub constant: f64,
}

pub fn cesaro_with_diagnostic(
    spec: &CoinSpec,
    initial: &StateVector,
    steps: usize,
) -> Result<CesaroReport> {
    if steps == 0 {
        return Err(Error::ZeroSteps);
    }
    initial.check_size(spec.size())?;
    check_unit(initial)?;
    let size = spec.size();
    let mut amps = initial.amplitudes().to_vec();
    let mut acc = KahanSums::new(size.vertices());
    let mut average = None;
    for t in 0..2 * steps {
        if t == steps {
            average = Some(acc.mean(steps));
        }
        acc.add(&vertex_weights(size, &amps));
        step_in_place(spec, &mut amps);
    }
    let average = Distribution::new(average.expect("steps > 0"), Provenance::Cesaro)?;
    let doubled = Distribution::new(acc.mean(2 * steps), Provenance::Cesaro)?;
    let sup_diff = average.sup_distance(&doubled);
    let constant = sup_diff * steps as f64;
    debug!("cesaro T={steps}: |avg(T) - avg(2T)| = {sup_diff:e}, C = {constant:.4}");
    Ok(CesaroReport {
        steps,
        average,
        doubled,
        sup_diff,
        constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{Chirality, PathSize};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn szegedy_p3() -> CoinSpec {
        CoinSpec::new(
            c(1.0, 0.0),
            c(-1.0, 0.0),
            vec![[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]],
        )
        .unwrap()
    }

    fn complex_spec() -> CoinSpec {
        let w = vec![
            [Complex64::from_polar(0.6, 0.3), Complex64::from_polar(0.8, -1.1)],
            [Complex64::from_polar(0.28, 2.0), Complex64::from_polar(0.96, 0.5)],
            [Complex64::from_polar(0.8, -0.7), Complex64::from_polar(0.6, 0.0)],
        ];
        CoinSpec::from_angles(0.4, 2.1, w).unwrap()
    }

    #[test]
    fn shift_examples() {
        let size = PathSize::new(2).unwrap();
        let s = apply_shift(&StateVector::origin(size));
        assert_eq!(s, StateVector::basis(size, 1, Chirality::L).unwrap());
        let s = apply_shift(&StateVector::basis(size, 1, Chirality::L).unwrap());
        assert_eq!(s, StateVector::origin(size));
        let s = apply_shift(&StateVector::basis(size, 2, Chirality::R).unwrap());
        assert_eq!(s, StateVector::basis(size, 3, Chirality::L).unwrap());
    }

    #[test]
    fn shift_is_involution() {
        let size = PathSize::new(5).unwrap();
        let amps = (0..size.dim()).map(|i| c(i as f64, -(i as f64).sqrt())).collect();
        let psi = StateVector::from_amplitudes(size, amps).unwrap();
        assert_eq!(apply_shift(&apply_shift(&psi)), psi);
    }

    #[test]
    fn one_step_from_origin() {
        let spec = szegedy_p3();
        let out = step(&spec, &StateVector::origin(spec.size())).unwrap();
        let expected = StateVector::basis(spec.size(), 1, Chirality::L).unwrap();
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn no_norm_drift() {
        let spec = complex_spec();
        let mut psi = StateVector::origin(spec.size());
        for _ in 0..10_000 {
            psi = step(&spec, &psi).unwrap();
        }
        assert!((psi.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn cesaro_single_step_is_point_mass() {
        let spec = complex_spec();
        let p = cesaro_average(&spec, &StateVector::origin(spec.size()), 1).unwrap();
        assert_eq!(p.probs(), &[1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn cesaro_zero_steps_is_error() {
        let spec = szegedy_p3();
        assert_eq!(
            cesaro_average(&spec, &StateVector::origin(spec.size()), 0),
            Err(Error::ZeroSteps)
        );
    }

    #[test]
    fn cesaro_szegedy_p3_converges() {
        let spec = szegedy_p3();
        let p = cesaro_average(&spec, &StateVector::origin(spec.size()), 100_000).unwrap();
        let expected = [0.25, 0.5, 0.25];
        for (a, b) in p.probs().iter().zip(expected) {
            assert!((a - b).abs() < 1e-2);
        }
    }

    #[test]
    fn consecutive_averages_differ_by_single_term() {
        let spec = complex_spec();
        let psi = StateVector::origin(spec.size());
        for t in [1usize, 2, 7, 50, 333] {
            let a = cesaro_average(&spec, &psi, t).unwrap();
            let b = cesaro_average(&spec, &psi, t + 1).unwrap();
            assert!(a.sup_distance(&b) <= 2.0 / t as f64);
        }
    }

    #[test]
    fn walk_iterator_matches_cesaro() {
        let spec = complex_spec();
        let psi = StateVector::origin(spec.size());
        let records: Vec<_> = Walk::new(&spec, psi.clone()).unwrap().take(40).collect();
        assert_eq!(records[39].t, 39);
        let mut mean = vec![0.0; spec.size().vertices()];
        for r in &records {
            for (m, p) in mean.iter_mut().zip(r.distribution.probs()) {
                *m += p / 40.0;
            }
        }
        let direct = cesaro_average(&spec, &psi, 40).unwrap();
        for (a, b) in mean.iter().zip(direct.probs()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn diagnostic_reports_convergence_constant() {
        let spec = szegedy_p3();
        let report = cesaro_with_diagnostic(&spec, &StateVector::origin(spec.size()), 2000).unwrap();
        assert!((report.sup_diff * 2000.0 - report.constant).abs() < 1e-12);
        assert!(report.constant < 10.0);
    }
}
