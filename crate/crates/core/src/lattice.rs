//! Exact linear algebra over a fixed intersection lattice.
//!
//! A cohomology class and its Poincaré-dual homology class share one
//! coordinate vector, so `[ω] + t·PD(e)` is plain vector arithmetic on
//! [`ClassVector`]s. Nothing in this module touches floating point.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, is_integer, Rational};

/// Coordinate vector of a (co)homology class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassVector(Vec<Rational>);

impl ClassVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        ClassVector(coords)
    }

    pub fn zeros(n: usize) -> Self {
        ClassVector(vec![Rational::zero(); n])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        ClassVector(coords.iter().map(|&c| int(c)).collect())
    }

    /// The `i`-th basis vector of a rank-`n` lattice.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Rational::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(is_integer)
    }

    pub fn scaled(&self, t: &Rational) -> Self {
        ClassVector(self.0.iter().map(|c| c * t).collect())
    }

    /// `self + t·other`.
    pub fn plus_scaled(&self, t: &Rational, other: &ClassVector) -> Self {
        debug_assert_eq!(self.len(), other.len());
        ClassVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + t * b)
                .collect(),
        )
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }
}

impl Add for &ClassVector {
    type Output = ClassVector;
    fn add(self, rhs: &ClassVector) -> ClassVector {
        debug_assert_eq!(self.len(), rhs.len());
        ClassVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ClassVector {
    type Output = ClassVector;
    fn sub(self, rhs: &ClassVector) -> ClassVector {
        debug_assert_eq!(self.len(), rhs.len());
        ClassVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &ClassVector {
    type Output = ClassVector;
    fn neg(self) -> ClassVector {
        ClassVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for ClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_strings().join(", "))
    }
}

/// Dense square matrix of rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<Rational>,
}

impl SquareMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        SquareMatrix { n, data }
    }

    /// Build from integer rows; errors if the rows are not square.
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Malformed("matrix rows are not all of length n".into()));
        }
        Ok(Self::from_fn(n, |i, j| int(rows[i][j])))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.n + j]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        debug_assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .filter(|&j| !self.get(i, j).is_zero())
                    .fold(Rational::zero(), |acc, j| acc + self.get(i, j) * &v[j])
            })
            .collect()
    }

    pub fn mul(&self, other: &SquareMatrix) -> SquareMatrix {
        debug_assert_eq!(self.n, other.n);
        SquareMatrix::from_fn(self.n, |i, j| {
            (0..self.n).fold(Rational::zero(), |acc, k| acc + self.get(i, k) * other.get(k, j))
        })
    }

    pub fn neg(&self) -> SquareMatrix {
        SquareMatrix {
            n: self.n,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    /// `xᵀ·self·x`.
    pub fn quadratic_form(&self, x: &[Rational]) -> Rational {
        self.mul_vec(x)
            .iter()
            .zip(x)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// Principal submatrix on the leading `k` indices.
    pub fn leading(&self, k: usize) -> SquareMatrix {
        SquareMatrix::from_fn(k, |i, j| self.get(i, j).clone())
    }

    /// Principal submatrix on an arbitrary index list.
    pub fn principal(&self, idx: &[usize]) -> SquareMatrix {
        SquareMatrix::from_fn(idx.len(), |i, j| self.get(idx[i], idx[j]).clone())
    }

    /// Integer matrix `L·self` together with the common denominator `L`.
    fn to_integer_scaled(&self) -> (BigInt, Vec<Vec<BigInt>>) {
        let l = self
            .data
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let rows = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        let x = self.get(i, j);
                        x.numer() * (&l / x.denom())
                    })
                    .collect()
            })
            .collect();
        (l, rows)
    }

    pub fn determinant(&self) -> Rational {
        if self.n == 0 {
            return Rational::one();
        }
        let (l, a) = self.to_integer_scaled();
        let det_scaled = bareiss_determinant(a);
        Rational::new(det_scaled, num_traits::pow(l, self.n))
    }

    /// Leading principal minors `Δ_1, …, Δ_n`, computed exactly.
    ///
    /// One fraction-free elimination pass produces every minor as a pivot;
    /// when a pivot vanishes the remaining minors are computed one by one.
    pub fn leading_principal_minors(&self) -> Vec<Rational> {
        let n = self.n;
        let (l, mut a) = self.to_integer_scaled();
        let mut minors = Vec::with_capacity(n);
        let mut prev = BigInt::one();
        let mut scale = BigInt::one();
        for k in 0..n {
            scale *= &l;
            let pivot = a[k][k].clone();
            if pivot.is_zero() {
                minors.push(Rational::zero());
                for m in k + 1..n {
                    minors.push(self.leading(m + 1).determinant());
                }
                return minors;
            }
            minors.push(Rational::new(pivot.clone(), scale.clone()));
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &pivot * &a[i][j] - &a[i][k] * &a[k][j];
                    debug_assert!((&num % &prev).is_zero());
                    a[i][j] = num / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = pivot;
        }
        minors
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = (0..self.n).map(|j| format_rational(self.get(i, j))).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * prev
}

/// Fraction-free Gauss–Jordan elimination of `[a | I]`.
///
/// Returns `(d, r)` with `a·r = d·I`, or `None` when `a` is singular. All
/// intermediate values are integer minors of `a`, so every division is exact.
fn bareiss_adjugate(a: &[Vec<BigInt>]) -> Option<(BigInt, Vec<Vec<BigInt>>)> {
    let n = a.len();
    let width = 2 * n;
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let mut prev = BigInt::one();
    for k in 0..n {
        let p = (k..n).find(|&r| !m[r][k].is_zero())?;
        m.swap(k, p);
        let (before, rest) = m.split_at_mut(k);
        let (pivot_row, after) = rest.split_first_mut().expect("k < n");
        for row in before.iter_mut().chain(after.iter_mut()) {
            let factor = row[k].clone();
            for j in 0..width {
                if j == k {
                    continue;
                }
                let num = &pivot_row[k] * &row[j] - &factor * &pivot_row[j];
                debug_assert!((&num % &prev).is_zero());
                row[j] = num / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = pivot_row[k].clone();
    }
    let r = m.into_iter().map(|row| row[n..].to_vec()).collect();
    Some((prev, r))
}

/// Exact inverse via [`bareiss_adjugate`]; `None` if singular.
pub fn inverse(m: &SquareMatrix) -> Option<SquareMatrix> {
    let (l, a) = m.to_integer_scaled();
    let (d, r) = bareiss_adjugate(&a)?;
    // (a/l)⁻¹ = l·a⁻¹ = l·r/d
    Some(SquareMatrix::from_fn(m.n, |i, j| {
        Rational::new(&r[i][j] * &l, d.clone())
    }))
}

/// `(−1)^k·Δ_k > 0` for every leading principal minor.
pub fn is_negative_definite(m: &SquareMatrix) -> Result<bool> {
    if !m.is_symmetric() {
        return Err(Error::Malformed("matrix is not symmetric".into()));
    }
    Ok(minors_alternate(&m.leading_principal_minors()))
}

fn minors_alternate(minors: &[Rational]) -> bool {
    minors.iter().enumerate().all(|(k, d)| {
        // minor index k+1: sign must be (−1)^(k+1)
        if k % 2 == 0 {
            d.is_negative()
        } else {
            d.is_positive()
        }
    })
}

/// `−M⁻¹` for a symmetric negative-definite `M` with non-negative
/// off-diagonal entries; every entry of the result is non-negative.
pub fn neg_inverse(m: &SquareMatrix) -> Result<SquareMatrix> {
    if !m.is_symmetric() {
        return Err(Error::Malformed("matrix is not symmetric".into()));
    }
    let n = m.dim();
    for i in 0..n {
        for j in 0..n {
            if i != j && m.get(i, j).is_negative() {
                return Err(Error::Precondition(format!(
                    "off-diagonal entry ({i},{j}) = {} is negative",
                    format_rational(m.get(i, j))
                )));
            }
        }
    }
    let minors = m.leading_principal_minors();
    if !minors_alternate(&minors) {
        let shown: Vec<String> = minors.iter().map(format_rational).collect();
        return Err(Error::Definiteness(format!(
            "leading minors [{}] do not alternate in sign",
            shown.join(", ")
        )));
    }
    let inv = inverse(m).ok_or_else(|| Error::Definiteness("matrix is singular".into()))?;
    let neg = inv.neg();
    if let Some(bad) = neg.data.iter().find(|x| x.is_negative()) {
        return Err(Error::PropertyViolation(format!(
            "−M⁻¹ has a negative entry {}",
            format_rational(bad)
        )));
    }
    Ok(neg)
}

/// `v = n / d` with `n` integral and `d` the lcm of the denominators.
fn integer_form(v: &ClassVector) -> (Vec<BigInt>, BigInt) {
    let mut d = BigInt::one();
    for x in v.coords() {
        if !x.denom().is_one() && !(&d % x.denom()).is_zero() {
            d = d.lcm(x.denom());
        }
    }
    let n = v
        .coords()
        .iter()
        .map(|x| {
            if x.is_zero() {
                BigInt::zero()
            } else if x.denom() == &d {
                x.numer().clone()
            } else {
                x.numer() * (&d / x.denom())
            }
        })
        .collect();
    (n, d)
}

/// Integer Gram matrix with labelled basis and optional distinguished classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionLattice {
    gram: Vec<Vec<i64>>,
    labels: Vec<String>,
    canonical_class: Option<ClassVector>,
    reference_class: Option<ClassVector>,
}

impl IntersectionLattice {
    pub fn new(gram: Vec<Vec<i64>>, labels: Vec<String>) -> Result<Self> {
        let n = gram.len();
        if n == 0 {
            return Err(Error::Malformed("lattice rank must be positive".into()));
        }
        if let Some(i) = gram.iter().position(|r| r.len() != n) {
            return Err(Error::Malformed(format!(
                "gram row {i} has length {} but rank is {n}",
                gram[i].len()
            )));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Malformed(format!(
                        "gram is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        if labels.len() != n {
            return Err(Error::Malformed(format!(
                "{} labels for rank {n}",
                labels.len()
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::Malformed(format!("duplicate basis label `{l}`")));
            }
        }
        Ok(IntersectionLattice {
            gram,
            labels,
            canonical_class: None,
            reference_class: None,
        })
    }

    pub fn with_canonical_class(mut self, k: ClassVector) -> Result<Self> {
        self.check_len(&k)?;
        self.canonical_class = Some(k);
        Ok(self)
    }

    /// Attach the orientation class of the positive cone; its square must be
    /// positive.
    pub fn with_reference_class(mut self, w: ClassVector) -> Result<Self> {
        self.check_len(&w)?;
        if !self.square(&w)?.is_positive() {
            return Err(Error::Malformed(
                "reference class must have positive square".into(),
            ));
        }
        self.reference_class = Some(w);
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn basis_vector(&self, label: &str) -> Option<ClassVector> {
        self.label_index(label).map(|i| ClassVector::unit(self.rank(), i))
    }

    pub fn canonical_class(&self) -> Option<&ClassVector> {
        self.canonical_class.as_ref()
    }

    pub fn reference_class(&self) -> Option<&ClassVector> {
        self.reference_class.as_ref()
    }

    fn check_len(&self, v: &ClassVector) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::Malformed(format!(
                "class has {} coordinates but lattice rank is {}",
                v.len(),
                self.rank()
            )));
        }
        Ok(())
    }

    /// `aᵀ·gram·b`, accumulated over a common denominator.
    pub fn pair(&self, a: &ClassVector, b: &ClassVector) -> Result<Rational> {
        self.check_len(a)?;
        self.check_len(b)?;
        let (an, ad) = integer_form(a);
        let (bn, bd) = integer_form(b);
        let mut acc = BigInt::zero();
        for (i, ai) in an.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let mut row = BigInt::zero();
            for (j, bj) in bn.iter().enumerate() {
                let g = self.gram[i][j];
                if g != 0 && !bj.is_zero() {
                    row += bj * g;
                }
            }
            acc += ai * row;
        }
        Ok(Rational::new(acc, ad * bd))
    }

    pub fn square(&self, a: &ClassVector) -> Result<Rational> {
        self.pair(a, a)
    }

    /// Gram matrix of a list of classes.
    pub fn gram_of(&self, classes: &[&ClassVector]) -> Result<SquareMatrix> {
        let n = classes.len();
        let mut data = vec![Rational::zero(); n * n];
        for i in 0..n {
            for j in i..n {
                let p = self.pair(classes[i], classes[j])?;
                data[j * n + i] = p.clone();
                data[i * n + j] = p;
            }
        }
        Ok(SquareMatrix { n, data })
    }

    fn reference(&self) -> Result<&ClassVector> {
        self.reference_class
            .as_ref()
            .ok_or_else(|| Error::Configuration("lattice has no reference class".into()))
    }

    fn canonical(&self) -> Result<&ClassVector> {
        self.canonical_class
            .as_ref()
            .ok_or_else(|| Error::Configuration("lattice has no canonical class".into()))
    }

    /// Positive square and positive pairing with the reference class.
    pub fn is_positive_cone(&self, a: &ClassVector) -> Result<bool> {
        let w = self.reference()?;
        Ok(self.square(a)?.is_positive() && self.pair(a, w)?.is_positive())
    }

    /// `2(g − 1 − K·e)`, the expected dimension with `c₁ = −K`.
    pub fn expected_dimension(&self, e: &ClassVector, genus: u32) -> Result<Rational> {
        let k = self.canonical()?;
        Ok(int(2) * (int(genus as i64) - int(1) - self.pair(k, e)?))
    }

    /// The expected dimension together with its adjunction form
    /// `2(e·e + 1 − g)`; the two agree exactly when `(e, g)` satisfies
    /// adjunction.
    pub fn expected_dimension_report(&self, e: &ClassVector, genus: u32) -> Result<DimensionReport> {
        let value = self.expected_dimension(e, genus)?;
        let via_adjunction = int(2) * (self.square(e)? + int(1) - int(genus as i64));
        Ok(DimensionReport {
            consistent: value == via_adjunction,
            value,
            via_adjunction,
        })
    }

    /// `2g − 2 = e·e + K·e`.
    pub fn adjunction_check(&self, e: &ClassVector, genus: u32) -> Result<bool> {
        let k = self.canonical()?;
        if !e.is_integral() {
            return Err(Error::Precondition(format!("class {e} is not integral")));
        }
        let lhs = int(2 * genus as i64 - 2);
        Ok(lhs == self.square(e)? + self.pair(k, e)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionReport {
    pub value: Rational,
    pub via_adjunction: Rational,
    /// False flags input whose `(e, g)` violates adjunction.
    pub consistent: bool,
}
