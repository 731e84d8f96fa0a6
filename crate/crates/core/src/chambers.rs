//! Chamber and corner decomposition of the positive cone by declared
//! negative curves, reflections, and the explicit shift constructions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{is_negative_definite, neg_inverse, ClassVector, IntersectionLattice, SquareMatrix};
use crate::moves::{h_param_of, Certificate, ModelRef, Move};
use crate::rational::{abs, format_rational, halve, int, Rational};

/// Maximum number of halvings in the ε and r searches.
pub const HALVING_STEPS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveData {
    pub label: String,
    pub class: ClassVector,
    pub genus: u32,
}

impl CurveData {
    pub fn new(label: impl Into<String>, class: ClassVector, genus: u32) -> Self {
        CurveData {
            label: label.into(),
            class,
            genus,
        }
    }
}

/// A lattice together with its declared negative curves.
#[derive(Debug, Clone)]
pub struct CurveModel {
    lattice: Arc<IntersectionLattice>,
    curves: Vec<CurveData>,
    completeness_assumed: bool,
    metadata: BTreeMap<String, String>,
}

impl CurveModel {
    /// Validates integrality, negative squares, non-negative mutual pairings
    /// and (when a canonical class is present) adjunction for every curve.
    pub fn new(
        lattice: IntersectionLattice,
        curves: Vec<CurveData>,
        completeness_assumed: bool,
    ) -> Result<Self> {
        let mut labels = BTreeSet::new();
        for c in &curves {
            if !labels.insert(c.label.as_str()) {
                return Err(Error::Malformed(format!("duplicate curve label `{}`", c.label)));
            }
            if c.class.len() != lattice.rank() {
                return Err(Error::Malformed(format!(
                    "curve `{}` has {} coordinates but lattice rank is {}",
                    c.label,
                    c.class.len(),
                    lattice.rank()
                )));
            }
            if !c.class.is_integral() {
                return Err(Error::Malformed(format!("curve `{}` is not integral", c.label)));
            }
            let sq = lattice.square(&c.class)?;
            if !sq.is_negative() {
                return Err(Error::ModelInconsistency(format!(
                    "curve `{}` has square {} but declared curves must be negative",
                    c.label,
                    format_rational(&sq)
                )));
            }
            if lattice.canonical_class().is_some() && !lattice.adjunction_check(&c.class, c.genus)? {
                return Err(Error::ModelInconsistency(format!(
                    "curve `{}` violates adjunction with genus {}",
                    c.label, c.genus
                )));
            }
        }
        for (i, a) in curves.iter().enumerate() {
            for b in &curves[i + 1..] {
                let p = lattice.pair(&a.class, &b.class)?;
                if p.is_negative() {
                    return Err(Error::ModelInconsistency(format!(
                        "curves `{}` and `{}` pair to {}",
                        a.label,
                        b.label,
                        format_rational(&p)
                    )));
                }
            }
        }
        Ok(CurveModel {
            lattice: Arc::new(lattice),
            curves,
            completeness_assumed,
            metadata: BTreeMap::new(),
        })
    }

    pub fn with_metadata(mut self, key: &str, value: &str) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    pub fn lattice(&self) -> &IntersectionLattice {
        &self.lattice
    }

    pub fn lattice_arc(&self) -> Arc<IntersectionLattice> {
        Arc::clone(&self.lattice)
    }

    pub fn curves(&self) -> &[CurveData] {
        &self.curves
    }

    pub fn curve_index(&self, label: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.label == label)
    }

    pub fn completeness_assumed(&self) -> bool {
        self.completeness_assumed
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    /// `k = −e·e` for curve `i`.
    pub fn curve_k(&self, i: usize) -> Result<Rational> {
        Ok(-self.lattice.square(&self.curves[i].class)?)
    }

    pub fn pairings(&self, alpha: &ClassVector) -> Result<Vec<Rational>> {
        self.curves
            .iter()
            .map(|c| self.lattice.pair(alpha, &c.class))
            .collect()
    }

    /// Positive cone and strictly positive on every declared curve.
    ///
    /// Only meaningful when the declared curve list is complete, so this
    /// refuses models that do not assume it.
    pub fn is_kahler(&self, alpha: &ClassVector) -> Result<bool> {
        if !self.completeness_assumed {
            return Err(Error::Configuration(
                "model does not assume its curve list is complete".into(),
            ));
        }
        if !self.lattice.is_positive_cone(alpha)? {
            return Ok(false);
        }
        for c in &self.curves {
            if !self.lattice.pair(alpha, &c.class)?.is_positive() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Restricted Gram matrix `M_ij = e_i·e_j` on an index set.
    pub fn gram_restriction(&self, idx: &[usize]) -> Result<SquareMatrix> {
        let classes: Vec<&ClassVector> = idx.iter().map(|&i| &self.curves[i].class).collect();
        self.lattice.gram_of(&classes)
    }

    fn labels_of(&self, idx: &[usize]) -> Vec<&str> {
        idx.iter().map(|&i| self.curves[i].label.as_str()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MembershipTag {
    InteriorKahler,
    Chamber,
    Corner,
    MixedBoundary,
}

impl MembershipTag {
    pub fn as_str(self) -> &'static str {
        match self {
            MembershipTag::InteriorKahler => "interior-Kähler",
            MembershipTag::Chamber => "chamber",
            MembershipTag::Corner => "corner",
            MembershipTag::MixedBoundary => "mixed-boundary",
        }
    }
}

impl fmt::Display for MembershipTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An admissible set `G` with its negative-definite Gram restriction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberDescriptor {
    pub admissible_set: Vec<usize>,
    pub gram_restriction: SquareMatrix,
}

impl ChamberDescriptor {
    /// Errors with a model inconsistency unless the set is admissible.
    pub fn new(model: &CurveModel, set: &[usize]) -> Result<Self> {
        let mut idx = set.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if let Some(&bad) = idx.iter().find(|&&i| i >= model.curves.len()) {
            return Err(Error::Malformed(format!("curve index {bad} out of range")));
        }
        let m = model.gram_restriction(&idx)?;
        // A negative-definite Gram already forces linear independence.
        if !is_negative_definite(&m)? {
            return Err(Error::ModelInconsistency(format!(
                "curves {{{}}} do not span a negative definite subspace",
                model.labels_of(&idx).join(", ")
            )));
        }
        Ok(ChamberDescriptor {
            admissible_set: idx,
            gram_restriction: m,
        })
    }

    pub fn len(&self) -> usize {
        self.admissible_set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.admissible_set.is_empty()
    }
}

/// The raw partition data of a positive-cone class, without the
/// admissibility assertion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub vanishing_set: Vec<usize>,
    pub tag: MembershipTag,
    pub pairings: Vec<Rational>,
}

pub fn partition(model: &CurveModel, alpha: &ClassVector) -> Result<Partition> {
    if !model.lattice.is_positive_cone(alpha)? {
        return Err(Error::Domain(format!("class {alpha} is not in the positive cone")));
    }
    let pairings = model.pairings(alpha)?;
    let vanishing_set: Vec<usize> = (0..pairings.len())
        .filter(|&i| !pairings[i].is_positive())
        .collect();
    let zeros = vanishing_set.iter().filter(|&&i| pairings[i].is_zero()).count();
    let tag = if vanishing_set.is_empty() {
        MembershipTag::InteriorKahler
    } else if zeros == vanishing_set.len() {
        MembershipTag::Corner
    } else if zeros == 0 {
        MembershipTag::Chamber
    } else {
        MembershipTag::MixedBoundary
    };
    Ok(Partition {
        vanishing_set,
        tag,
        pairings,
    })
}

pub fn classify(model: &CurveModel, alpha: &ClassVector) -> Result<(ChamberDescriptor, MembershipTag)> {
    let p = partition(model, alpha)?;
    let d = ChamberDescriptor::new(model, &p.vanishing_set)?;
    Ok((d, p.tag))
}

/// `R_e(α) = α − 2(α·e / e·e)·e`.
pub fn reflect(l: &IntersectionLattice, alpha: &ClassVector, e: &ClassVector) -> Result<ClassVector> {
    let ee = l.square(e)?;
    if ee.is_zero() {
        return Err(Error::Singularity(format!("{e} has square zero")));
    }
    let c = int(-2) * l.pair(alpha, e)? / ee;
    Ok(alpha.plus_scaled(&c, e))
}

fn is_odd_sphere(k: &Rational, genus: u32) -> bool {
    genus == 0 && k.numer() % 2u32 != num_bigint::BigInt::zero()
}

/// Reflection of an interior-Kähler class across the wall of one curve,
/// with a certificate that reaches it by a single inflation.
pub fn reflected_chamber_certificate(
    model: &CurveModel,
    alpha: &ClassVector,
    e_index: usize,
) -> Result<(ClassVector, Certificate)> {
    let curve = model
        .curves
        .get(e_index)
        .ok_or_else(|| Error::Malformed(format!("curve index {e_index} out of range")))?;
    let l = model.lattice();
    let k = model.curve_k(e_index)?;
    if is_odd_sphere(&k, curve.genus) {
        return Err(Error::Precondition(format!(
            "`{}` is a sphere of odd square −{}",
            curve.label,
            format_rational(&k)
        )));
    }
    let v = l.pair(alpha, &curve.class)?;
    let skeleton = |base: ClassVector, moves: Vec<Move>, target: ClassVector| Certificate {
        model: ModelRef::inline(model),
        base_class: base,
        initial_objects: None,
        moves,
        target_class: target,
        annotations: Vec::new(),
    };
    if v.is_zero() {
        return Ok((alpha.clone(), skeleton(alpha.clone(), Vec::new(), alpha.clone())));
    }
    if !model.is_kahler(alpha)? {
        return Err(Error::Precondition(format!("class {alpha} is not interior-Kähler")));
    }
    let h = int(h_param_of(&k, curve.genus)?);
    let target = reflect(l, alpha, &curve.class)?;
    let start = &v / (int(2) * &k);
    for n in 0..=HALVING_STEPS {
        let eps = halve(&start, n);
        let base = alpha.plus_scaled(&-&eps, &curve.class);
        if !model.is_kahler(&base)? {
            continue;
        }
        let t = &eps + int(2) * &v / &k;
        let bound = int(2) * l.pair(&base, &curve.class)? / &h;
        if t >= bound {
            continue;
        }
        let moves = vec![Move::Inflate {
            object: curve.label.clone(),
            t,
        }];
        return Ok((target.clone(), skeleton(base, moves, target)));
    }
    Err(Error::SearchFailure(format!(
        "no ε ≤ {} makes α − ε·e Kähler",
        format_rational(&start)
    )))
}

fn check_set(model: &CurveModel, g: &ChamberDescriptor) -> Result<()> {
    if let Some(&bad) = g.admissible_set.iter().find(|&&i| i >= model.curves.len()) {
        return Err(Error::Malformed(format!("curve index {bad} out of range")));
    }
    Ok(())
}

/// `α + Σ t_i e_i` with `t = c·v` for the combination `c = −M⁻¹`.
fn shift(model: &CurveModel, alpha: &ClassVector, g: &ChamberDescriptor, t: &[Rational]) -> ClassVector {
    let mut out = alpha.clone();
    for (ti, &i) in t.iter().zip(&g.admissible_set) {
        out = out.plus_scaled(ti, &model.curves[i].class);
    }
    out
}

/// `t = −M⁻¹v` and the corner class `α′ = α + Σ t_i e_i`.
pub fn corner_shift(
    model: &CurveModel,
    alpha: &ClassVector,
    g: &ChamberDescriptor,
) -> Result<(Vec<Rational>, ClassVector)> {
    check_set(model, g)?;
    let l = model.lattice();
    if !l.is_positive_cone(alpha)? {
        return Err(Error::Domain(format!("class {alpha} is not in the positive cone")));
    }
    let v: Vec<Rational> = g
        .admissible_set
        .iter()
        .map(|&i| l.pair(alpha, &model.curves[i].class))
        .collect::<Result<_>>()?;
    if let Some(pos) = v.iter().position(|x| !x.is_positive()) {
        return Err(Error::Precondition(format!(
            "α pairs {} with `{}`; corner shifts need positive pairings",
            format_rational(&v[pos]),
            model.curves[g.admissible_set[pos]].label
        )));
    }
    let t = neg_inverse(&g.gram_restriction)?.mul_vec(&v);
    let out = shift(model, alpha, g, &t);
    for &i in &g.admissible_set {
        if !l.pair(&out, &model.curves[i].class)?.is_zero() {
            return Err(Error::PropertyViolation("corner point does not vanish on G".into()));
        }
    }
    if t.iter().any(|x| !x.is_positive()) {
        return Err(Error::PropertyViolation("corner shift has a non-positive coefficient".into()));
    }
    if l.square(&out)? < l.square(alpha)? {
        return Err(Error::PropertyViolation("corner shift decreased the square".into()));
    }
    Ok((t, out))
}

pub fn corner_point(model: &CurveModel, alpha: &ClassVector, g: &ChamberDescriptor) -> Result<ClassVector> {
    corner_shift(model, alpha, g).map(|(_, c)| c)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberPoint {
    pub class: ClassVector,
    /// The ε actually used after halving.
    pub epsilon: Rational,
    /// `s = −M⁻¹·(1,…,1)`.
    pub s: Vec<Rational>,
}

/// Push a corner class into its chamber: the result pairs exactly `−ε` with
/// every curve of `G`.
pub fn chamber_point(
    model: &CurveModel,
    corner: &ClassVector,
    g: &ChamberDescriptor,
    epsilon: &Rational,
) -> Result<ChamberPoint> {
    check_set(model, g)?;
    if !epsilon.is_positive() {
        return Err(Error::Precondition("ε must be positive".into()));
    }
    let l = model.lattice();
    for &i in &g.admissible_set {
        if !l.pair(corner, &model.curves[i].class)?.is_zero() {
            return Err(Error::Precondition(format!(
                "class is not in the corner of `{}`",
                model.curves[i].label
            )));
        }
    }
    let ones = vec![Rational::one(); g.len()];
    let s = neg_inverse(&g.gram_restriction)?.mul_vec(&ones);
    let direction = shift(model, &ClassVector::zeros(corner.len()), g, &s);
    for n in 0..=HALVING_STEPS {
        let eps = halve(epsilon, n);
        let class = corner.plus_scaled(&eps, &direction);
        if !l.is_positive_cone(&class)? {
            continue;
        }
        for &i in &g.admissible_set {
            if l.pair(&class, &model.curves[i].class)? != -&eps {
                return Err(Error::PropertyViolation("chamber point does not pair −ε on G".into()));
            }
        }
        return Ok(ChamberPoint { class, epsilon: eps, s });
    }
    Err(Error::SearchFailure(format!(
        "no ε ≤ {} keeps the chamber point in the positive cone",
        format_rational(epsilon)
    )))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryShift {
    /// `s = −M⁻¹v`.
    pub s: Vec<Rational>,
    /// Largest dyadic `r ≤ 1` with `α − r·Σ s_i e_i` interior-Kähler, if any
    /// is found within the halving budget.
    pub r_max_hint: Option<Rational>,
}

pub fn boundary_to_interior(
    model: &CurveModel,
    alpha: &ClassVector,
    g: &ChamberDescriptor,
    v: &[Rational],
) -> Result<BoundaryShift> {
    check_set(model, g)?;
    if v.len() != g.len() {
        return Err(Error::Malformed(format!(
            "{} target pairings for {} curves",
            v.len(),
            g.len()
        )));
    }
    if v.iter().any(|x| !x.is_positive()) {
        return Err(Error::Precondition("target pairings must be positive".into()));
    }
    let s = neg_inverse(&g.gram_restriction)?.mul_vec(v);
    if s.iter().any(|x| !x.is_positive()) {
        return Err(Error::ModelInconsistency(
            "−M⁻¹v has a non-positive entry; the Gram data cannot come from curves".into(),
        ));
    }
    let ms = g.gram_restriction.mul_vec(&s);
    if ms.iter().zip(v).any(|(a, b)| a != &-b) {
        return Err(Error::PropertyViolation("Σ s_i e_i·e_j ≠ −v_j".into()));
    }
    let direction = shift(model, &ClassVector::zeros(alpha.len()), g, &s);
    let mut r_max_hint = None;
    if model.completeness_assumed() {
        for n in 0..=HALVING_STEPS {
            let r = halve(&Rational::one(), n);
            if model.is_kahler(&alpha.plus_scaled(&-&r, &direction))? {
                r_max_hint = Some(r);
                break;
            }
        }
    }
    Ok(BoundaryShift { s, r_max_hint })
}

/// A rational `s` with `α² + 2s|α·e| > s²k > 2s|α·e|`, by exact bisection.
pub fn single_curve_shift(model: &CurveModel, alpha: &ClassVector, e: &CurveData) -> Result<Rational> {
    let l = model.lattice();
    if !l.is_positive_cone(alpha)? {
        return Err(Error::Domain(format!("class {alpha} is not in the positive cone")));
    }
    let v = l.pair(alpha, &e.class)?;
    if !v.is_negative() {
        return Err(Error::Precondition(format!(
            "α·e = {} but the shift needs α·e < 0",
            format_rational(&v)
        )));
    }
    let k = -l.square(&e.class)?;
    if !k.is_positive() {
        return Err(Error::Precondition("curve must have negative square".into()));
    }
    let a2 = l.square(alpha)?;
    let av = abs(&v);
    let f = |s: &Rational| &a2 + int(2) * s * &av - s * s * &k;
    let lo = int(2) * &av / &k;
    let mut gap = Rational::one();
    let mut hi = &lo + &gap;
    let mut found = None;
    for _ in 0..256 {
        if !f(&hi).is_positive() {
            break;
        }
        gap *= int(2);
        hi = &lo + &gap;
    }
    for _ in 0..256 {
        let mid = (&lo + &hi) / int(2);
        if f(&mid).is_positive() {
            found = Some(mid);
            break;
        }
        hi = mid;
    }
    let s = found.ok_or_else(|| Error::SearchFailure("bisection did not terminate".into()))?;
    let beta = alpha.plus_scaled(&-&s, &e.class);
    let ok = l.pair(&beta, &e.class)? > av
        && l.square(&beta)?.is_positive()
        && l.pair(&beta, alpha)?.is_positive();
    if !ok {
        return Err(Error::PropertyViolation("shifted class fails its inequalities".into()));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_kk_model, build_ruled_model, kk_gamma0_model, Parity};
    use crate::rational::ratio;

    fn class(l: &IntersectionLattice, terms: &[(i64, &str)]) -> ClassVector {
        let mut v = ClassVector::zeros(l.rank());
        for &(c, label) in terms {
            v = v.plus_scaled(&int(c), &l.basis_vector(label).unwrap());
        }
        v
    }

    fn alpha0(l: &IntersectionLattice) -> ClassVector {
        class(l, &[(1, "w0"), (-8, "C1"), (-21, "D123"), (-12, "C2"), (-14, "D249")])
    }

    fn gamma0(model: &CurveModel) -> ChamberDescriptor {
        let idx: Vec<usize> = ["C1", "D123", "C2", "D249"]
            .iter()
            .map(|l| model.curve_index(l).unwrap())
            .collect();
        ChamberDescriptor::new(model, &idx).unwrap()
    }

    fn in_order(g: &ChamberDescriptor, model: &CurveModel, xs: &[Rational]) -> Vec<Rational> {
        // descriptor indices are sorted; reorder to C1, D123, C2, D249
        let order = ["C1", "D123", "C2", "D249"];
        order
            .iter()
            .map(|l| {
                let i = model.curve_index(l).unwrap();
                xs[g.admissible_set.iter().position(|&j| j == i).unwrap()].clone()
            })
            .collect()
    }

    #[test]
    fn omega0_is_a_full_corner() {
        let m = build_kk_model(true).unwrap();
        let w0 = m.lattice().basis_vector("w0").unwrap();
        let p = partition(&m, &w0).unwrap();
        assert_eq!(p.vanishing_set.len(), 21);
        assert_eq!(p.tag, MembershipTag::Corner);
        // the 21 abstract generators are not admissible together
        assert!(matches!(classify(&m, &w0), Err(Error::ModelInconsistency(_))));
    }

    #[test]
    fn alpha0_is_interior_kahler_in_gamma0_model() {
        let m = kk_gamma0_model().unwrap();
        let a = alpha0(m.lattice());
        let (d, tag) = classify(&m, &a).unwrap();
        assert!(d.is_empty());
        assert_eq!(tag, MembershipTag::InteriorKahler);
        let pairs = m.pairings(&a).unwrap();
        assert_eq!(pairs, vec![int(3), int(1), int(1), int(2)]);
    }

    #[test]
    fn negative_square_is_domain_error() {
        let m = build_kk_model(true).unwrap();
        let c1 = m.lattice().basis_vector("C1").unwrap();
        assert!(matches!(classify(&m, &c1), Err(Error::Domain(_))));
    }

    #[test]
    fn reflection_examples() {
        let l = IntersectionLattice::new(vec![vec![1, 0], vec![0, -1]], vec!["a".into(), "b".into()]).unwrap();
        let r = reflect(&l, &ClassVector::from_ints(&[1, 1]), &ClassVector::from_ints(&[0, 1])).unwrap();
        assert_eq!(r, ClassVector::from_ints(&[1, -1]));
        let fixed = ClassVector::from_ints(&[3, 0]);
        assert_eq!(reflect(&l, &fixed, &ClassVector::from_ints(&[0, 1])).unwrap(), fixed);
        assert!(matches!(
            reflect(&l, &fixed, &ClassVector::from_ints(&[1, 1])),
            Err(Error::Singularity(_))
        ));

        let kk = build_kk_model(false).unwrap();
        let l = kk.lattice();
        let c1 = l.basis_vector("C1").unwrap();
        let b1 = l.basis_vector("D123").unwrap();
        assert_eq!(reflect(l, &c1, &b1).unwrap(), class(l, &[(1, "C1"), (2, "D123")]));
    }

    #[test]
    fn minus_three_curve_breaks_integrality() {
        let kk = build_kk_model(false).unwrap();
        let l = kk.lattice();
        let d = l.basis_vector("D123").unwrap();
        let c1 = l.basis_vector("C1").unwrap();
        let r = reflect(l, &d, &c1).unwrap();
        assert!(!r.is_integral());
        assert_eq!(r, d.plus_scaled(&ratio(2, 3), &c1));
    }

    #[test]
    fn corner_point_recovers_gamma0_coefficients() {
        let m = kk_gamma0_model().unwrap();
        let l = m.lattice();
        let g = gamma0(&m);
        let a = alpha0(l);
        let (t, corner) = corner_shift(&m, &a, &g).unwrap();
        assert_eq!(in_order(&g, &m, &t), vec![int(8), int(21), int(12), int(14)]);
        assert_eq!(corner, l.basis_vector("w0").unwrap());
        assert_eq!(l.square(&corner).unwrap(), l.square(&a).unwrap() + int(85));
        assert_eq!(l.square(&corner).unwrap(), int(100));
    }

    #[test]
    fn corner_point_single_curve() {
        let m = kk_gamma0_model().unwrap();
        let l = m.lattice();
        let i = m.curve_index("C1").unwrap();
        let g = ChamberDescriptor::new(&m, &[i]).unwrap();
        let a = alpha0(l);
        let (t, _) = corner_shift(&m, &a, &g).unwrap();
        assert_eq!(t, vec![int(1)]); // v = 3, k = 3
    }

    #[test]
    fn corner_point_rejects_nonpositive_v() {
        let m = kk_gamma0_model().unwrap();
        let l = m.lattice();
        let g = gamma0(&m);
        let w0 = l.basis_vector("w0").unwrap();
        assert!(matches!(corner_point(&m, &w0, &g), Err(Error::Precondition(_))));
    }

    #[test]
    fn chamber_point_gamma0() {
        let m = kk_gamma0_model().unwrap();
        let l = m.lattice();
        let g = gamma0(&m);
        let w0 = l.basis_vector("w0").unwrap();
        let cp = chamber_point(&m, &w0, &g, &int(1)).unwrap();
        assert_eq!(in_order(&g, &m, &cp.s), vec![int(5), int(14), int(8), int(9)]);
        assert_eq!(cp.epsilon, int(1));
        assert!(l.is_positive_cone(&cp.class).unwrap());
        for &i in &g.admissible_set {
            assert_eq!(l.pair(&cp.class, &m.curves()[i].class).unwrap(), int(-1));
        }
    }

    #[test]
    fn boundary_to_interior_examples() {
        let m = kk_gamma0_model().unwrap();
        let l = m.lattice();
        let g = gamma0(&m);
        let w0 = l.basis_vector("w0").unwrap();
        // descriptor order is sorted by index: C1, C2, D123, D249
        let v_sorted = |xs: [i64; 4]| -> Vec<Rational> {
            let order = ["C1", "D123", "C2", "D249"];
            g.admissible_set
                .iter()
                .map(|&i| int(xs[order.iter().position(|l| m.curve_index(l).unwrap() == i).unwrap()]))
                .collect()
        };
        let b = boundary_to_interior(&m, &w0, &g, &v_sorted([1, 1, 1, 1])).unwrap();
        assert_eq!(in_order(&g, &m, &b.s), vec![int(5), int(14), int(8), int(9)]);
        let b = boundary_to_interior(&m, &w0, &g, &v_sorted([3, 1, 1, 2])).unwrap();
        assert_eq!(in_order(&g, &m, &b.s), vec![int(8), int(21), int(12), int(14)]);
        assert_eq!(b.r_max_hint, Some(int(1)));
    }

    fn diagonal_model(h2: i64, k: i64) -> (CurveModel, CurveData) {
        let l = IntersectionLattice::new(vec![vec![h2, 0], vec![0, -k]], vec!["h".into(), "e".into()])
            .unwrap()
            .with_reference_class(ClassVector::from_ints(&[1, 0]))
            .unwrap();
        let e = CurveData::new("e", ClassVector::from_ints(&[0, 1]), 1);
        (CurveModel::new(l, vec![e.clone()], true).unwrap(), e)
    }

    #[test]
    fn single_curve_shift_examples() {
        // α² = 4, α·e = −1, k = 1
        let (m, e) = diagonal_model(5, 1);
        assert_eq!(single_curve_shift(&m, &ClassVector::from_ints(&[1, 1]), &e).unwrap(), int(3));
        // α² = 1, α·e = −1, k = 2
        let (m, e) = diagonal_model(6, 2);
        let alpha = ClassVector::new(vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(m.lattice().square(&alpha).unwrap(), int(1));
        assert_eq!(single_curve_shift(&m, &alpha, &e).unwrap(), ratio(5, 4));
    }

    #[test]
    fn single_curve_shift_needs_negative_pairing() {
        let (m, e) = diagonal_model(5, 1);
        assert!(matches!(
            single_curve_shift(&m, &ClassVector::from_ints(&[1, 0]), &e),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn reflected_certificate_on_minus_one_curve() {
        let m = kk_gamma0_model().unwrap();
        let l = m.lattice();
        let a = alpha0(l);
        let b = m.curve_index("D123").unwrap();
        let (r, cert) = reflected_chamber_certificate(&m, &a, b).unwrap();
        assert_eq!(r, reflect(l, &a, &m.curves()[b].class).unwrap());
        // v = 1, k = 1: ε = 1/2, t = 5/2 < 3
        match &cert.moves[..] {
            [Move::Inflate { t, .. }] => assert_eq!(*t, ratio(5, 2)),
            other => panic!("unexpected moves {other:?}"),
        }
        let report = crate::moves::verify_with_model(&cert, &m);
        assert!(report.passed, "{:?}", report.failure);
    }

    #[test]
    fn reflected_certificate_refuses_odd_sphere() {
        let m = build_ruled_model(0, 3, Parity::Nontrivial).unwrap();
        let a = ClassVector::from_ints(&[2, 1]);
        assert!(matches!(
            reflected_chamber_certificate(&m, &a, 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn reflected_certificate_on_wall_is_identity() {
        let m = kk_gamma0_model().unwrap();
        let w0 = m.lattice().basis_vector("w0").unwrap();
        let (r, cert) = reflected_chamber_certificate(&m, &w0, 0).unwrap();
        assert_eq!(r, w0);
        assert!(cert.moves.is_empty());
    }
}
