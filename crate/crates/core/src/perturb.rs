//! Floating-point study of how a `k`-fold tangency splits into `k`
//! transverse intersections when one branch is pushed off by `ε²`.
//!
//! This is the only module that uses floating point.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_ITER: usize = 50;
pub const DISTINCT_TOL: f64 = 1e-10;
/// Relative distances below this are rounding noise and left out of fits.
pub const DISTANCE_FLOOR: f64 = 1e-14;

/// `g(z) = a·z^k + Σ_j tail[j]·z^(k+1+j)` with `|g(z) − a·z^k| ≤ c·|z|^(k+1)`
/// on the unit disc.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalCurveModel {
    pub leading: Complex64,
    pub order: u32,
    pub tail: Vec<Complex64>,
    pub bound: f64,
}

impl LocalCurveModel {
    /// The remainder bound defaults to `Σ |tail_j|`, valid for `|z| ≤ 1`.
    pub fn new(leading: Complex64, order: u32, tail: Vec<Complex64>) -> Result<Self> {
        if leading.norm() == 0.0 || !leading.is_finite() {
            return Err(Error::Malformed("leading coefficient must be non-zero".into()));
        }
        if order == 0 {
            return Err(Error::Malformed("order must be at least 1".into()));
        }
        let bound = tail.iter().map(|c| c.norm()).sum();
        Ok(LocalCurveModel {
            leading,
            order,
            tail,
            bound,
        })
    }

    pub fn with_bound(mut self, c: f64) -> Result<Self> {
        // negated so NaN is rejected
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(c >= self.tail.iter().map(|t| t.norm()).sum::<f64>()) {
            return Err(Error::Malformed(format!("remainder bound {c} is smaller than the tail")));
        }
        self.bound = c;
        Ok(self)
    }

    /// `z^k + z^(k+1)`.
    pub fn monomial_plus_next(k: u32) -> Self {
        Self::new(Complex64::new(1.0, 0.0), k, vec![Complex64::new(1.0, 0.0)]).expect("valid")
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.tail.iter().rev() {
            acc = acc * z + c;
        }
        (acc * z + self.leading) * z.powu(self.order)
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let k = self.order;
        let mut acc = self.leading * k as f64 * z.powu(k - 1);
        for (j, c) in self.tail.iter().enumerate() {
            let p = k + 1 + j as u32;
            acc += c * p as f64 * z.powu(p - 1);
        }
        acc
    }
}

/// `R_ε = max_i (2ε/|a_i|)^(1/k_i)`, after checking ε is small enough.
pub fn r_epsilon(models: &[LocalCurveModel], eps: f64) -> Result<f64> {
    if models.is_empty() {
        return Err(Error::Malformed("no curve models".into()));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Range(format!("ε = {eps} must be positive and finite")));
    }
    if eps >= 1.0 {
        return Err(Error::Range(format!("ε = {eps} must be below 1")));
    }
    let r = models
        .iter()
        .map(|m| (2.0 * eps / m.leading.norm()).powf(1.0 / m.order as f64))
        .fold(0.0, f64::max);
    if r >= 1.0 {
        return Err(Error::Range(format!(
            "R_ε = {r} must be below 1 for the remainder bounds to apply"
        )));
    }
    let limit = models
        .iter()
        .filter(|m| m.bound > 0.0)
        .map(|m| m.leading.norm() / (2.0 * m.bound))
        .fold(f64::INFINITY, f64::min);
    if r.sqrt() >= limit {
        return Err(Error::Range(format!(
            "√R_ε = {} is not below min |a_i|/(2c_i) = {limit}",
            r.sqrt()
        )));
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Intersection {
    pub model: usize,
    pub root: usize,
    pub z: Complex64,
    pub seed: Complex64,
    /// Sign of the real Jacobian determinant of `g` at `z`.
    pub sign: i8,
    pub distance: f64,
}

fn newton(m: &LocalCurveModel, target: Complex64, seed: Complex64) -> Result<Complex64> {
    let mut z = seed;
    let mut res = (m.eval(z) - target).norm();
    for _ in 0..NEWTON_MAX_ITER {
        let d = m.derivative(z);
        if d.norm() == 0.0 {
            return Err(Error::NumericalFailure(format!("vanishing derivative at {z}")));
        }
        let step = (m.eval(z) - target) / d;
        let mut lambda = 1.0;
        let mut next = z - step;
        let mut next_res = (m.eval(next) - target).norm();
        for _ in 0..30 {
            if next_res <= res {
                break;
            }
            lambda /= 2.0;
            next = z - step * lambda;
            next_res = (m.eval(next) - target).norm();
        }
        let moved = (next - z).norm();
        z = next;
        res = next_res;
        if moved <= NEWTON_TOL * z.norm().max(f64::MIN_POSITIVE) {
            return Ok(z);
        }
    }
    Err(Error::NumericalFailure(format!(
        "Newton from {seed} did not converge in {NEWTON_MAX_ITER} steps"
    )))
}

fn jacobian_sign(m: &LocalCurveModel, z: Complex64) -> i8 {
    let h = 1e-6 * z.norm().max(1e-300);
    let dx = (m.eval(z + h) - m.eval(z - h)) / (2.0 * h);
    let i = Complex64::new(0.0, h);
    let dy = (m.eval(z + i) - m.eval(z - i)) / (2.0 * h);
    let det = dx.re * dy.im - dy.re * dx.im;
    if det > 0.0 {
        1
    } else if det < 0.0 {
        -1
    } else {
        0
    }
}

/// Solve `g_i(z) = ε²` near the `k_i` predicted roots of every model.
pub fn perturbed_intersections(models: &[LocalCurveModel], eps: f64) -> Result<Vec<Intersection>> {
    let r = r_epsilon(models, eps)?;
    let target = Complex64::new(eps * eps, 0.0);
    let mut out = Vec::new();
    for (mi, m) in models.iter().enumerate() {
        let k = m.order;
        let base = (target / m.leading).powf(1.0 / k as f64);
        let mut found: Vec<Intersection> = Vec::new();
        for j in 0..k {
            let eta = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / k as f64);
            let seed = base * eta;
            let z = newton(m, target, seed)?;
            if z.norm() >= r {
                return Err(Error::PropertyViolation(format!(
                    "model {mi}: solution {z} lies outside |z| < R_ε = {r}"
                )));
            }
            if found.iter().any(|p| (p.z - z).norm() <= DISTINCT_TOL * z.norm().max(1.0e-300)) {
                return Err(Error::PropertyViolation(format!(
                    "model {mi}: seeds collapsed, found fewer than {k} solutions"
                )));
            }
            found.push(Intersection {
                model: mi,
                root: j as usize,
                z,
                seed,
                sign: jacobian_sign(m, z),
                distance: (z - seed).norm(),
            });
        }
        for h in &found {
            if let Some(o) = out.iter().find(|o: &&Intersection| (o.z - h.z).norm() <= DISTINCT_TOL * h.z.norm()) {
                return Err(Error::PropertyViolation(format!(
                    "models {} and {mi} meet the perturbed branch at the same point {}",
                    o.model, h.z
                )));
            }
        }
        out.extend(found);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub model: usize,
    /// `None` when fewer than two distances survive the floor.
    pub slope: Option<f64>,
    pub residual: Option<f64>,
    pub points_used: usize,
    pub excluded: usize,
}

/// Least-squares `(slope, rms residual)` of `y` against `x`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len();
    if n < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - icpt - slope * x).powi(2)).sum();
    Some((slope, (rss / n as f64).sqrt()))
}

/// Log-log slope of the worst root distance against ε, per model.
pub fn order_of_contact_study(models: &[LocalCurveModel], eps_list: &[f64]) -> Result<Vec<SlopeFit>> {
    if eps_list.len() < 4 {
        return Err(Error::Precondition("need at least four ε values".into()));
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Precondition("ε values must be strictly decreasing".into()));
    }
    let mut points: Vec<Vec<(f64, f64)>> = vec![Vec::new(); models.len()];
    let mut excluded = vec![0usize; models.len()];
    for &eps in eps_list {
        let hits = perturbed_intersections(models, eps)?;
        for (mi, pts) in points.iter_mut().enumerate() {
            let worst = hits
                .iter()
                .filter(|h| h.model == mi)
                .max_by(|a, b| a.distance.total_cmp(&b.distance))
                .expect("every model has roots");
            if worst.distance <= DISTANCE_FLOOR * worst.seed.norm() {
                excluded[mi] += 1;
            } else {
                pts.push((eps.ln(), worst.distance.ln()));
            }
        }
    }
    Ok(points
        .into_iter()
        .enumerate()
        .map(|(mi, pts)| {
            let (xs, ys): (Vec<f64>, Vec<f64>) = pts.iter().copied().unzip();
            let fit = least_squares(&xs, &ys);
            SlopeFit {
                model: mi,
                slope: fit.map(|f| f.0),
                residual: fit.map(|f| f.1),
                points_used: pts.len(),
                excluded: excluded[mi],
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn r_epsilon_examples() {
        let m = LocalCurveModel::new(c(1.0), 1, vec![]).unwrap().with_bound(0.01).unwrap();
        assert!((r_epsilon(std::slice::from_ref(&m), 0.1).unwrap() - 0.2).abs() < 1e-15);
        let m2 = LocalCurveModel::new(c(4.0), 2, vec![]).unwrap();
        let r = r_epsilon(&[m.clone(), m2], 0.1).unwrap();
        assert!((r - 0.05f64.sqrt()).abs() < 1e-15);
        assert!(matches!(r_epsilon(&[m], 10.0), Err(Error::Range(_))));
    }

    #[test]
    fn smallness_bound_is_enforced() {
        let m = LocalCurveModel::new(c(1.0), 1, vec![c(10.0)]).unwrap();
        // √0.2 ≈ 0.447 > 1/20
        assert!(matches!(r_epsilon(&[m], 0.1), Err(Error::Range(_))));
    }

    #[test]
    fn pure_square_hits_plus_minus_eps() {
        let m = LocalCurveModel::new(c(1.0), 2, vec![]).unwrap();
        let hits = perturbed_intersections(&[m], 0.1).unwrap();
        assert_eq!(hits.len(), 2);
        for h in &hits {
            assert!((h.z.norm() - 0.1).abs() < 1e-15);
            assert!(h.distance < 1e-15);
            assert_eq!(h.sign, 1);
        }
    }

    #[test]
    fn linear_plus_quadratic_matches_quadratic_formula() {
        let m = LocalCurveModel::new(c(1.0), 1, vec![c(0.05)]).unwrap();
        let hits = perturbed_intersections(&[m], 0.1).unwrap();
        // 0.05 z² + z − 0.01 = 0, the small root
        let want = (-1.0 + (1.0f64 + 4.0 * 0.05 * 0.01).sqrt()) / (2.0 * 0.05);
        assert_eq!(hits.len(), 1);
        assert!((hits[0].z.re - want).abs() < 1e-15);
        assert!(hits[0].z.im.abs() < 1e-15);
    }

    #[test]
    fn cubic_roots_near_scaled_unity() {
        let m = LocalCurveModel::new(c(1.0), 3, vec![c(0.1)]).unwrap();
        let eps: f64 = 0.01;
        let hits = perturbed_intersections(&[m], eps).unwrap();
        assert_eq!(hits.len(), 3);
        for h in &hits {
            assert_eq!(h.sign, 1);
            assert!(h.distance < 10.0 * eps.powf(4.0 / 3.0) * h.seed.norm());
        }
    }

    #[test]
    fn several_models_give_distinct_points() {
        let a = LocalCurveModel::new(c(1.0), 1, vec![]).unwrap();
        let b = LocalCurveModel::new(c(-2.0), 2, vec![c(0.5)]).unwrap();
        let hits = perturbed_intersections(&[a.clone(), b], 0.01).unwrap();
        assert_eq!(hits.len(), 3);
        assert_eq!(hits.iter().filter(|h| h.model == 1).count(), 2);
        assert!(matches!(
            perturbed_intersections(&[a.clone(), a], 0.01),
            Err(Error::PropertyViolation(_))
        ));
    }

    #[test]
    fn slopes_follow_four_over_k() {
        let eps: Vec<f64> = (0..7).map(|i| 10f64.powf(-2.0 - 0.5 * i as f64)).collect();
        let fits = order_of_contact_study(&[LocalCurveModel::monomial_plus_next(2)], &eps).unwrap();
        assert!((fits[0].slope.unwrap() - 2.0).abs() < 0.2);
        let fits = order_of_contact_study(&[LocalCurveModel::monomial_plus_next(1)], &eps).unwrap();
        assert!((fits[0].slope.unwrap() - 4.0).abs() < 0.3);
    }

    #[test]
    fn pure_monomial_is_excluded_from_fit() {
        let eps: Vec<f64> = (0..4).map(|i| 10f64.powf(-2.0 - i as f64)).collect();
        let m = LocalCurveModel::new(c(1.0), 2, vec![]).unwrap();
        let fits = order_of_contact_study(&[m], &eps).unwrap();
        assert_eq!(fits[0].slope, None);
        assert_eq!(fits[0].excluded, 4);
    }
}
