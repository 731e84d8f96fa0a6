#![allow(clippy::needless_range_loop)]

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use symcone::chambers::{CurveData, CurveModel};
use symcone::{ClassVector, IntersectionLattice, Rational};

pub fn q(p: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(d))
}

/// Determinant by cofactor expansion along the first row.
pub fn laplace_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut acc = 0i128;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
            .collect();
        let term = m[0][j] as i128 * laplace_det(&minor);
        acc += if j % 2 == 0 { term } else { -term };
    }
    acc
}

/// Sylvester's criterion for `M < 0`: the k-th leading minor has sign (−1)^k.
pub fn oracle_negative_definite(m: &[Vec<i64>]) -> bool {
    (1..=m.len()).all(|k| {
        let lead: Vec<Vec<i64>> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
        let d = laplace_det(&lead);
        if k % 2 == 1 {
            d < 0
        } else {
            d > 0
        }
    })
}

/// A symmetric matrix with `|entries| ≤ max_entry`, non-negative
/// off-diagonal and negative diagonal.
pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, max_entry: i64) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; n]; n];
    for i in 0..n {
        m[i][i] = -rng.gen_range(1..=max_entry);
        for j in 0..i {
            let x = if rng.gen_bool(0.5) { 0 } else { rng.gen_range(1..=max_entry.min(3)) };
            m[i][j] = x;
            m[j][i] = x;
        }
    }
    m
}

pub fn random_negative_definite(rng: &mut ChaCha8Rng, max_n: usize, max_entry: i64) -> Vec<Vec<i64>> {
    loop {
        let n = rng.gen_range(1..=max_n);
        let m = random_symmetric(rng, n, max_entry);
        if oracle_negative_definite(&m) {
            return m;
        }
    }
}

/// `v·G·w` straight from the Gram rows.
pub fn raw_pair(gram: &[Vec<i64>], v: &ClassVector, w: &ClassVector) -> Rational {
    let mut acc = Rational::zero();
    for (i, row) in gram.iter().enumerate() {
        for (j, &g) in row.iter().enumerate() {
            if g != 0 {
                acc += &v.coords()[i] * &w.coords()[j] * Rational::from_integer(g.into());
            }
        }
    }
    acc
}

pub fn random_rational(rng: &mut ChaCha8Rng, span: i64, max_den: i64) -> Rational {
    q(rng.gen_range(-span..=span), rng.gen_range(1..=max_den))
}

pub fn random_class(rng: &mut ChaCha8Rng, n: usize, span: i64, max_den: i64) -> ClassVector {
    ClassVector::new((0..n).map(|_| random_rational(rng, span, max_den)).collect())
}

/// `⟨1⟩ ⊕ M`: a reference class `h` orthogonal to curves `e_1..e_n` with
/// Gram `m` and random genera.
pub struct RandomModel {
    pub model: CurveModel,
    pub gram_m: Vec<Vec<i64>>,
}

pub fn random_model(rng: &mut ChaCha8Rng, m: Vec<Vec<i64>>) -> RandomModel {
    let n = m.len();
    let mut gram = vec![vec![0i64; n + 1]; n + 1];
    gram[0][0] = 1;
    for i in 0..n {
        for j in 0..n {
            gram[i + 1][j + 1] = m[i][j];
        }
    }
    let mut labels = vec!["h".to_string()];
    labels.extend((1..=n).map(|i| format!("e{i}")));
    let l = IntersectionLattice::new(gram, labels)
        .unwrap()
        .with_reference_class(ClassVector::unit(n + 1, 0))
        .unwrap();
    let curves = (0..n)
        .map(|i| CurveData::new(format!("e{}", i + 1), ClassVector::unit(n + 1, i + 1), rng.gen_range(0..=2)))
        .collect();
    RandomModel {
        model: CurveModel::new(l, curves, true).unwrap(),
        gram_m: m,
    }
}

/// A Kähler class of `random_model`: `c·h − Σ s_i e_i` with `s = −M⁻¹v`
/// for a random positive `v`, and `c` large enough.
pub fn random_kahler(rng: &mut ChaCha8Rng, rm: &RandomModel) -> ClassVector {
    let model = &rm.model;
    let n = rm.gram_m.len();
    let m = symcone::SquareMatrix::from_i64_rows(&rm.gram_m).unwrap();
    let v: Vec<Rational> = (0..n).map(|_| q(rng.gen_range(1..=6), rng.gen_range(1..=3))).collect();
    let s = symcone::lattice::neg_inverse(&m).unwrap().mul_vec(&v);
    let mut alpha = ClassVector::zeros(n + 1);
    for (i, si) in s.iter().enumerate() {
        alpha = alpha.plus_scaled(&-si, &ClassVector::unit(n + 1, i + 1));
    }
    let mut c = Rational::one();
    loop {
        let a = alpha.plus_scaled(&c, &ClassVector::unit(n + 1, 0));
        if model.is_kahler(&a).unwrap() {
            return a;
        }
        c *= Rational::from_integer(2.into());
    }
}
