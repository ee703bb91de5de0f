//! Exact worst-case expected loss over a Hellinger ball on a finite support.
//!
//! Writing `u_i = sqrt(q_i)` and `a_i = sqrt(p_i)`, the ball `H(p, q) <= rho`
//! becomes the spherical cap `{u >= 0, ||u|| = 1, <a, u> >= 1 - rho^2}` and
//! the expected loss becomes the quadratic form `sum l_i u_i^2`. Two
//! independent solvers attack this problem:
//!
//! * KKT: stationary points satisfy `u_i ∝ a_i / (nu - l_i)`; the multiplier
//!   `nu` is bisected so the affinity constraint binds. Mass on coordinates
//!   with `p_i = 0` is only possible at `nu = l_j`, which has a closed form.
//! * Projected gradient ascent over the convex hull of the cap, with random
//!   restarts. The objective is convex and 2-homogeneous, so its maximum over
//!   the hull is attained on the sphere.
//!
//! [`dense_grid_search`] adds a third, brute-force route for `K <= 3`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{HellingerRadius, LossStatistics};
use crate::error::{CertError, Result};
use crate::exec::Execution;
use crate::rng;
use crate::shifts::{discrete_hellinger, DiscreteDistribution};

pub const MAX_SUPPORT: usize = 32;
pub const FEASIBILITY_TOL: f64 = 1e-9;
pub const AGREEMENT_TOL: f64 = 1e-6;
const BISECTION_WIDTH: f64 = 1e-13;

#[derive(Debug, Deserialize)]
struct RawInstance {
    p: Vec<f64>,
    losses: Vec<f64>,
    #[serde(rename = "M")]
    ceiling: f64,
    rho: f64,
}

/// A finite-support reference distribution with per-point losses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct DiscreteInstance {
    p: DiscreteDistribution,
    losses: Vec<f64>,
    #[serde(rename = "M")]
    ceiling: f64,
    rho: HellingerRadius,
}

impl TryFrom<RawInstance> for DiscreteInstance {
    type Error = CertError;

    fn try_from(raw: RawInstance) -> Result<Self> {
        DiscreteInstance::new(
            DiscreteDistribution::new(raw.p)?,
            raw.losses,
            raw.ceiling,
            HellingerRadius::new(raw.rho)?,
        )
    }
}

impl DiscreteInstance {
    pub fn new(
        p: DiscreteDistribution,
        losses: Vec<f64>,
        ceiling: f64,
        rho: HellingerRadius,
    ) -> Result<Self> {
        if p.len() != losses.len() {
            return Err(CertError::Degenerate(format!(
                "support of size {} but {} losses",
                p.len(),
                losses.len()
            )));
        }
        if p.len() > MAX_SUPPORT {
            return Err(CertError::Degenerate(format!("support of size {} exceeds {MAX_SUPPORT}", p.len())));
        }
        if !(ceiling > 0.0 && ceiling.is_finite()) {
            return Err(crate::error::domain("ceiling", ceiling, "M > 0"));
        }
        if let Some((index, &value)) = losses.iter().enumerate().find(|(_, l)| !(0.0..=ceiling).contains(*l))
        {
            return Err(CertError::LossOutOfRange { index, value, ceiling });
        }
        Ok(DiscreteInstance { p, losses, ceiling, rho })
    }

    pub fn p(&self) -> &DiscreteDistribution {
        &self.p
    }

    pub fn losses(&self) -> &[f64] {
        &self.losses
    }

    pub fn ceiling(&self) -> f64 {
        self.ceiling
    }

    pub fn rho(&self) -> HellingerRadius {
        self.rho
    }

    pub fn with_rho(&self, rho: HellingerRadius) -> Self {
        DiscreteInstance { rho, ..self.clone() }
    }

    /// Mean and variance of the loss under `p`.
    pub fn stats(&self) -> Result<LossStatistics> {
        LossStatistics::from_discrete(self.p.probs(), &self.losses, self.ceiling)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMethod {
    KktBisection,
    ProjectedGradient,
    DenseGrid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub value: f64,
    pub maximizer: DiscreteDistribution,
    pub method: OracleMethod,
    /// Absolute difference between the KKT and projected-gradient values.
    pub certified_gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { restarts: 32, max_iterations: 5000, seed: 0x5eed, execution: Execution::Sequential }
    }
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

fn quad(losses: &[f64], u: &[f64]) -> f64 {
    losses.iter().zip(u).map(|(l, x)| l * x * x).sum()
}

fn argmax(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &v)| if v > best.1 { (i, v) } else { best })
        .0
}

/// Unit vector supported on `idx`, proportional to `a` there.
fn restricted(a: &[f64], idx: &[usize]) -> Vec<f64> {
    let mut u = vec![0.0; a.len()];
    let n = idx.iter().map(|&i| a[i] * a[i]).sum::<f64>().sqrt();
    for &i in idx {
        u[i] = a[i] / n;
    }
    u
}

/// KKT maximizer of `sum l_i u_i^2` over the cap with affinity level `c`.
pub(crate) fn kkt_maximizer(a: &[f64], losses: &[f64], c: f64) -> Vec<f64> {
    let k = a.len();
    if c <= 0.0 {
        let mut u = vec![0.0; k];
        u[argmax(losses)] = 1.0;
        return u;
    }
    if c >= 1.0 {
        return a.to_vec();
    }

    // Unconstrained optimum: all mass on the globally worst coordinates.
    let l_max = losses.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let top: Vec<usize> = (0..k).filter(|&i| losses[i] == l_max).collect();
    if top.iter().map(|&i| a[i] * a[i]).sum::<f64>().sqrt() >= c {
        return restricted(a, &top);
    }

    let support: Vec<usize> = (0..k).filter(|&i| a[i] > 0.0).collect();
    let l_supp = support.iter().map(|&i| losses[i]).fold(f64::NEG_INFINITY, f64::max);
    let mut candidates: Vec<Vec<f64>> = Vec::new();

    // Multiplier strictly above the worst loss on the support.
    let top_supp: Vec<usize> = support.iter().copied().filter(|&i| losses[i] == l_supp).collect();
    let top_norm = top_supp.iter().map(|&i| a[i] * a[i]).sum::<f64>().sqrt();
    if top_norm >= c {
        candidates.push(restricted(a, &top_supp));
    } else {
        let weights = |shift: f64| -> Vec<f64> {
            let mut w = vec![0.0; k];
            for &i in &support {
                w[i] = a[i] / (shift + l_supp - losses[i]);
            }
            w
        };
        let affinity = |shift: f64| {
            let w = weights(shift);
            dot(a, &w) / norm(&w)
        };
        let spread = (l_supp - losses.iter().copied().fold(f64::INFINITY, f64::min)).max(1e-300);
        let mut lo = 0.0;
        let mut hi = spread;
        while affinity(hi) < c {
            lo = hi;
            hi *= 2.0;
            if !hi.is_finite() {
                break;
            }
        }
        for _ in 0..2000 {
            if hi - lo <= BISECTION_WIDTH * hi.max(1.0) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if affinity(mid) >= c {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let w = weights(hi);
        let n = norm(&w);
        candidates.push(w.into_iter().map(|x| x / n).collect());
    }

    // Multiplier equal to the loss of an off-support coordinate j.
    for j in (0..k).filter(|&j| a[j] == 0.0 && losses[j] > l_supp) {
        let mut w = vec![0.0; k];
        for &i in &support {
            w[i] = a[i] / (losses[j] - losses[i]);
        }
        let scale = c / dot(a, &w);
        let mass = scale * scale * dot(&w, &w);
        if mass <= 1.0 {
            for x in &mut w {
                *x *= scale;
            }
            w[j] = (1.0 - mass).sqrt();
            candidates.push(w);
        }
    }

    candidates
        .into_iter()
        .max_by(|x, y| quad(losses, x).total_cmp(&quad(losses, y)))
        .expect("at least one KKT candidate")
}

/// Euclidean projection onto `{u >= 0, ||u|| <= 1, <a, u> >= c}`.
///
/// The projection has the form `(y + mu a)_+ / max(1, ||(y + mu a)_+||)` with
/// the multiplier `mu >= 0` found by bisection.
fn project_cap(y: &[f64], a: &[f64], c: f64) -> Vec<f64> {
    let at = |mu: f64| -> Vec<f64> {
        let mut z: Vec<f64> = y.iter().zip(a).map(|(yi, ai)| (yi + mu * ai).max(0.0)).collect();
        let n = norm(&z);
        if n > 1.0 {
            for x in &mut z {
                *x /= n;
            }
        }
        z
    };
    let base = at(0.0);
    if dot(a, &base) >= c {
        return base;
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while dot(a, &at(hi)) < c {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            break;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if dot(a, &at(mid)) >= c {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    at(hi)
}

/// Projected gradient ascent from `start`; returns the normalized iterate.
fn projected_gradient(a: &[f64], losses: &[f64], c: f64, start: &[f64], iters: usize) -> Vec<f64> {
    let l_max = losses.iter().copied().fold(0.0, f64::max);
    let mut u = project_cap(start, a, c);
    if l_max > 0.0 {
        let step = 5.0 / l_max;
        for _ in 0..iters {
            let y: Vec<f64> = u.iter().zip(losses).map(|(x, l)| x + step * 2.0 * l * x).collect();
            let next = project_cap(&y, a, c);
            let moved = next.iter().zip(&u).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
            u = next;
            if moved < 1e-15 {
                break;
            }
        }
    }
    let n = norm(&u);
    if n > 0.0 {
        u.iter().map(|x| x / n).collect()
    } else {
        a.to_vec()
    }
}

fn to_distribution(u: &[f64]) -> DiscreteDistribution {
    DiscreteDistribution::new(u.iter().map(|x| x * x).collect()).expect("maximizer has positive mass")
}

fn solve_sup(
    p: &DiscreteDistribution,
    losses: &[f64],
    rho: HellingerRadius,
    cfg: &OracleConfig,
) -> Result<OracleResult> {
    let a = p.sqrt_density();
    let r2 = rho.value() * rho.value();
    let c = 1.0 - r2;

    if rho.value() == 0.0 {
        return Ok(OracleResult {
            value: p.expectation(losses),
            maximizer: p.clone(),
            method: OracleMethod::KktBisection,
            certified_gap: 0.0,
        });
    }

    let kkt_q = to_distribution(&kkt_maximizer(&a, losses, c));
    let kkt_value = kkt_q.expectation(losses);

    let k = a.len();
    let starts = cfg.restarts + 1;
    let runs = cfg.execution.map_indexed(starts, |i| {
        let start: Vec<f64> = if i == 0 {
            a.clone()
        } else {
            let mut g = rng::stream(cfg.seed, i as u64);
            (0..k).map(|_| g.random::<f64>()).collect()
        };
        let u = projected_gradient(&a, losses, c, &start, cfg.max_iterations);
        let q = to_distribution(&u);
        (q.expectation(losses), q)
    });
    let (pg_value, pg_q) = runs.into_iter().max_by(|x, y| x.0.total_cmp(&y.0)).expect("at least one restart");

    let gap = (kkt_value - pg_value).abs();
    if gap > AGREEMENT_TOL {
        return Err(CertError::SolverDiagnostic(format!(
            "KKT value {kkt_value} and projected-gradient value {pg_value} differ by {gap} \
             (p = {:?}, losses = {losses:?}, rho = {})",
            p.probs(),
            rho.value()
        )));
    }
    let (value, maximizer, method) = if pg_value > kkt_value {
        (pg_value, pg_q, OracleMethod::ProjectedGradient)
    } else {
        (kkt_value, kkt_q, OracleMethod::KktBisection)
    };
    debug_assert!(discrete_hellinger(p, &maximizer) <= rho.value() + FEASIBILITY_TOL);
    Ok(OracleResult { value, maximizer, method, certified_gap: gap })
}

/// `sup { E_q[l] : H(p, q) <= rho }`.
pub fn worst_case_sup(inst: &DiscreteInstance) -> Result<OracleResult> {
    worst_case_sup_with(inst, &OracleConfig::default())
}

pub fn worst_case_sup_with(inst: &DiscreteInstance, cfg: &OracleConfig) -> Result<OracleResult> {
    solve_sup(&inst.p, &inst.losses, inst.rho, cfg)
}

/// `inf { E_q[l] : H(p, q) <= rho }`, computed as `M - sup E_q[M - l]`.
pub fn worst_case_inf(inst: &DiscreteInstance) -> Result<OracleResult> {
    worst_case_inf_with(inst, &OracleConfig::default())
}

pub fn worst_case_inf_with(inst: &DiscreteInstance, cfg: &OracleConfig) -> Result<OracleResult> {
    let flipped: Vec<f64> = inst.losses.iter().map(|l| inst.ceiling - l).collect();
    let res = solve_sup(&inst.p, &flipped, inst.rho, cfg)?;
    let value = res.maximizer.expectation(&inst.losses);
    Ok(OracleResult { value, ..res })
}

/// Brute-force search over the grid `{i / resolution}` of the simplex for
/// supports of size 2 or 3. Returns `None` for larger supports.
pub fn dense_grid_search(inst: &DiscreteInstance, resolution: usize, maximize: bool) -> Option<OracleResult> {
    let k = inst.p.len();
    if !(2..=3).contains(&k) {
        return None;
    }
    let n = resolution as f64;
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut consider = |q: Vec<f64>| {
        let Ok(qd) = DiscreteDistribution::new(q.clone()) else {
            return;
        };
        if discrete_hellinger(&inst.p, &qd) > inst.rho.value() {
            return;
        }
        let v = qd.expectation(&inst.losses);
        let better = match &best {
            None => true,
            Some((b, _)) => (maximize && v > *b) || (!maximize && v < *b),
        };
        if better {
            best = Some((v, q));
        }
    };
    for i in 0..=resolution {
        let x = i as f64 / n;
        if k == 2 {
            consider(vec![x, 1.0 - x]);
        } else {
            for j in 0..=(resolution - i) {
                let y = j as f64 / n;
                consider(vec![x, y, (1.0 - x - y).max(0.0)]);
            }
        }
    }
    best.map(|(value, q)| OracleResult {
        value,
        maximizer: DiscreteDistribution::new(q).expect("grid point is a distribution"),
        method: OracleMethod::DenseGrid,
        certified_gap: 0.0,
    })
}

/// Determinant of the Gram matrix of `sqrt q`, `sqrt p` and `f sqrt p`.
pub fn gram_determinant(p: &DiscreteDistribution, q: &DiscreteDistribution, f: &[f64]) -> f64 {
    let len = p.len().max(q.len()).max(f.len());
    let pp = p.padded(len);
    let qq = q.padded(len);
    let (mut g12, mut g13, mut g23, mut g33) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..len {
        let (pi, qi) = (pp.probs()[i], qq.probs()[i]);
        let fi = f.get(i).copied().unwrap_or(0.0);
        let s = (pi * qi).sqrt();
        g12 += s;
        g13 += fi * s;
        g23 += fi * pi;
        g33 += fi * fi * pi;
    }
    (g33 - g23 * g23) - g12 * (g12 * g33 - g23 * g13) + g13 * (g12 * g23 - g13)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{lower_bound, max_valid_radius_lower, max_valid_radius_upper, upper_bound};

    fn inst(p: &[f64], l: &[f64], rho: f64) -> DiscreteInstance {
        DiscreteInstance::new(
            DiscreteDistribution::new(p.to_vec()).unwrap(),
            l.to_vec(),
            1.0,
            HellingerRadius::new(rho).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn zero_radius_returns_reference() {
        let i = inst(&[0.2, 0.3, 0.5], &[0.1, 0.9, 0.4], 0.0);
        let s = worst_case_sup(&i).unwrap();
        let t = worst_case_inf(&i).unwrap();
        let e = 0.2 * 0.1 + 0.3 * 0.9 + 0.5 * 0.4;
        assert!((s.value - e).abs() < 1e-15);
        assert!((t.value - e).abs() < 1e-15);
        assert_eq!(&s.maximizer, i.p());
    }

    #[test]
    fn two_point_closed_forms() {
        for rho in [0.05, 0.1, 0.3, 0.5, 0.8, 0.95] {
            let r2: f64 = rho * rho;
            let s = worst_case_sup(&inst(&[1.0, 0.0], &[0.0, 1.0], rho)).unwrap();
            assert!((s.value - r2 * (2.0 - r2)).abs() < 1e-9, "rho={rho}: {}", s.value);
            let q = s.maximizer.probs();
            assert!((q[0] - (1.0 - r2).powi(2)).abs() < 1e-9);
            let t = worst_case_inf(&inst(&[1.0, 0.0], &[1.0, 0.0], rho)).unwrap();
            assert!((t.value - (1.0 - r2).powi(2)).abs() < 1e-9);
        }
    }

    #[test]
    fn maximizer_is_feasible_and_consistent() {
        let i = inst(&[0.1, 0.2, 0.3, 0.4, 0.0], &[0.5, 0.9, 0.1, 0.3, 0.7], 0.25);
        for r in [worst_case_sup(&i).unwrap(), worst_case_inf(&i).unwrap()] {
            let q = &r.maximizer;
            assert!(discrete_hellinger(i.p(), q) <= 0.25 + FEASIBILITY_TOL);
            assert!((q.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!((q.expectation(i.losses()) - r.value).abs() < 1e-12);
            assert!(r.certified_gap <= AGREEMENT_TOL);
        }
    }

    #[test]
    fn reaches_ceiling_beyond_point_mass_distance() {
        let p = [0.5, 0.3, 0.2];
        let l = [0.2, 1.0, 0.4];
        let to_point = discrete_hellinger(
            &DiscreteDistribution::new(p.to_vec()).unwrap(),
            &DiscreteDistribution::point_mass(3, 1).unwrap(),
        );
        let s = worst_case_sup(&inst(&p, &l, to_point + 1e-6)).unwrap();
        assert!((s.value - 1.0).abs() < 1e-12);
        let s = worst_case_sup(&inst(&p, &l, to_point - 0.05)).unwrap();
        assert!(s.value < 1.0);
    }

    #[test]
    fn off_support_mass() {
        // The worst coordinate carries no reference mass.
        let i = inst(&[0.6, 0.4, 0.0], &[0.1, 0.3, 1.0], 0.3);
        let s = worst_case_sup(&i).unwrap();
        assert!(s.maximizer.probs()[2] > 0.0);
        let g = dense_grid_search(&i, 1000, true).unwrap();
        assert!(g.value <= s.value + 1e-12);
        assert!(s.value - g.value < 5e-3);
    }

    #[test]
    fn three_solvers_agree_on_random_triples() {
        let mut rng = rng::stream(11, 0);
        for _ in 0..20 {
            let p: Vec<f64> = (0..3).map(|_| rng.random::<f64>() + 0.01).collect();
            let l: Vec<f64> = (0..3).map(|_| rng.random::<f64>()).collect();
            let rho = rng.random::<f64>() * 0.9;
            let i = inst(&p, &l, rho);
            let s = worst_case_sup(&i).unwrap();
            let t = worst_case_inf(&i).unwrap();
            let gs = dense_grid_search(&i, 1000, true).unwrap();
            let gt = dense_grid_search(&i, 1000, false).unwrap();
            assert!(gs.value <= s.value + 1e-12);
            assert!(gt.value >= t.value - 1e-12);
            assert!(s.value - gs.value < 5e-3);
            assert!(gt.value - t.value < 5e-3);
        }
    }

    #[test]
    fn sup_is_monotone_in_radius() {
        let base = inst(&[0.3, 0.3, 0.2, 0.2], &[0.9, 0.1, 0.5, 0.2], 0.0);
        let mut prev = f64::NEG_INFINITY;
        for step in 0..=20 {
            let rho = step as f64 / 20.0;
            let v = worst_case_sup(&base.with_rho(HellingerRadius::new(rho).unwrap())).unwrap().value;
            assert!(v >= prev - 1e-12);
            prev = v;
        }
        assert!((prev - 0.9).abs() < 1e-12);
    }

    #[test]
    fn certificate_dominates_oracle_on_examples() {
        let i = inst(&[0.9, 0.1], &[0.0, 1.0], 0.1);
        let stats = i.stats().unwrap();
        let up = upper_bound(&stats, i.rho()).unwrap().bound;
        assert!(up >= worst_case_sup(&i).unwrap().value - 1e-9);
        let j = inst(&[0.5, 0.5], &[0.0, 1.0], 0.1);
        let stats = j.stats().unwrap();
        assert!(0.1 <= max_valid_radius_lower(&stats));
        assert!(0.1 <= max_valid_radius_upper(&stats));
        let lo = lower_bound(&stats, j.rho()).unwrap().bound;
        assert!(lo <= worst_case_inf(&j).unwrap().value + 1e-9);
    }

    #[test]
    fn solvers_agree_on_random_instances() {
        let mut rng = rng::stream(29, 0);
        for trial in 0..300 {
            let k = 2 + trial % 9;
            let p: Vec<f64> = (0..k)
                .map(|i| if i > 0 && rng.random::<f64>() < 0.2 { 0.0 } else { rng.random::<f64>() })
                .collect();
            let l: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
            let rho = rng.random::<f64>();
            let i = inst(&p, &l, rho);
            let s = worst_case_sup(&i).unwrap();
            let t = worst_case_inf(&i).unwrap();
            assert!(t.value <= i.p().expectation(&l) + 1e-12);
            assert!(s.value >= i.p().expectation(&l) - 1e-12);
            for r in [&s, &t] {
                assert!(discrete_hellinger(i.p(), &r.maximizer) <= rho + FEASIBILITY_TOL);
            }
        }
    }

    #[test]
    fn instance_json() {
        let i: DiscreteInstance =
            serde_json::from_str(r#"{"p": [1, 0], "losses": [0, 1], "M": 1, "rho": 0.3}"#).unwrap();
        assert!((worst_case_sup(&i).unwrap().value - 0.1719).abs() < 1e-9);
        let bad = r#"{"p": [1, 0], "losses": [0, 2], "M": 1, "rho": 0.3}"#;
        assert!(serde_json::from_str::<DiscreteInstance>(bad).is_err());
        let bad = r#"{"p": [1, 0], "losses": [0], "M": 1, "rho": 0.3}"#;
        assert!(serde_json::from_str::<DiscreteInstance>(bad).is_err());
    }

    #[test]
    fn gram_examples() {
        let p = DiscreteDistribution::new(vec![0.2, 0.5, 0.3]).unwrap();
        let q = DiscreteDistribution::new(vec![0.6, 0.1, 0.3]).unwrap();
        assert!(gram_determinant(&p, &p, &[0.3, 0.8, 0.1]).abs() < 1e-15);
        assert!(gram_determinant(&p, &q, &[0.4, 0.4, 0.4]).abs() < 1e-15);
        assert!(gram_determinant(&p, &q, &[0.9, 0.0, 0.2]) > 0.0);
    }
}
