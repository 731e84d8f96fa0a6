//! Built-in datasets: ruled-surface cone models, the dual Hesse arrangement,
//! the 21-curve ball-quotient lattice and small test fixtures.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::chambers::{CurveData, CurveModel};
use crate::error::{Error, Result};
use crate::lattice::{ClassVector, IntersectionLattice};
use crate::moves::{h_param, Certificate, ModelRef, Move, ITERATED_DISJOIN};
use crate::rational::{format_rational, int, ratio, Rational};

/// The twelve collinear triples of the dual Hesse configuration.
pub const HESSE_TRIPLES: [[u8; 3]; 12] = [
    [1, 2, 3],
    [1, 4, 7],
    [1, 5, 9],
    [1, 6, 8],
    [2, 4, 9],
    [2, 5, 8],
    [2, 6, 7],
    [3, 4, 8],
    [3, 5, 7],
    [3, 6, 9],
    [4, 5, 6],
    [7, 8, 9],
];

fn triple_name(t: &[u8; 3]) -> String {
    format!("{}{}{}", t[0], t[1], t[2])
}

fn build_err(what: &str) -> Error {
    Error::Build(what.to_string())
}

// ---------------------------------------------------------------- ruled

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Trivial,
    Nontrivial,
}

impl FromStr for Parity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trivial" => Ok(Parity::Trivial),
            "nontrivial" => Ok(Parity::Nontrivial),
            _ => Err(Error::Malformed(format!("parity `{s}` is not trivial|nontrivial"))),
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Trivial => "trivial",
            Parity::Nontrivial => "nontrivial",
        })
    }
}

/// Ruled surface over a genus-`g` base, described by the two sections
/// `s⁺` and `s⁻` of squares `±k`.
#[derive(Debug, Clone)]
pub struct RuledModel {
    pub base_genus: u32,
    pub parity: Parity,
    pub k: u32,
    model: CurveModel,
}

/// Open interval `(lo, hi)`; `hi = None` means unbounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenInterval {
    pub lo: Rational,
    pub hi: Option<Rational>,
}

impl fmt::Display for OpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.hi {
            Some(hi) => write!(f, "({}, {})", format_rational(&self.lo), format_rational(hi)),
            None => write!(f, "({}, ∞)", format_rational(&self.lo)),
        }
    }
}

impl RuledModel {
    pub fn new(base_genus: u32, k: u32, parity: Parity) -> Result<Self> {
        if k == 0 {
            return Err(Error::Precondition("k must be positive".into()));
        }
        let odd = k % 2 == 1;
        if odd != (parity == Parity::Nontrivial) {
            return Err(Error::Precondition(format!(
                "a {parity} bundle has sections of {} square only",
                if parity == Parity::Trivial { "even" } else { "odd" }
            )));
        }
        let k64 = k as i64;
        let lattice = IntersectionLattice::new(
            vec![vec![k64, 0], vec![0, -k64]],
            vec![format!("s+{k}"), format!("s-{k}")],
        )?
        .with_reference_class(ClassVector::from_ints(&[1, 0]))?;
        let curve = CurveData::new(format!("s-{k}"), ClassVector::from_ints(&[0, 1]), base_genus);
        let model = CurveModel::new(lattice, vec![curve], true)?
            .with_metadata("family", "ruled")
            .with_metadata("base_genus", &base_genus.to_string())
            .with_metadata("parity", &parity.to_string());
        let f = ClassVector::new(vec![ratio(1, k64), ratio(-1, k64)]);
        if !model.lattice().square(&f)?.is_zero() {
            return Err(build_err("fiber class does not square to zero"));
        }
        Ok(RuledModel {
            base_genus,
            parity,
            k,
            model,
        })
    }

    pub fn curve_model(&self) -> &CurveModel {
        &self.model
    }

    pub fn into_curve_model(self) -> CurveModel {
        self.model
    }

    fn odd_sphere(&self) -> bool {
        self.parity == Parity::Nontrivial && self.base_genus == 0
    }

    /// Strict linear conditions `p + q·(c⁺, c⁻) > 0` cutting out the
    /// symplectic classes, as rows `[p⁺, p⁻]` acting on `(c⁺, c⁻)`.
    fn conditions(&self) -> Vec<[Rational; 2]> {
        let k = int(self.k as i64);
        // c⁺ > c⁻ and c⁺ > −c⁻
        let mut rows = vec![[int(1), int(-1)], [int(1), int(1)]];
        if self.odd_sphere() {
            // −c⁻/c⁺ > (1−k)/(k+1) with c⁺ > 0, cleared of denominators:
            // −(k+1)c⁻ − (1−k)c⁺ > 0
            rows.push([&k - int(1), -(&k + int(1))]);
            rows.push([int(1), int(0)]);
        }
        rows
    }

    /// Whether `α = c⁺·s⁺ + c⁻·s⁻` is represented by symplectic forms.
    pub fn symplectic_predicate(&self, alpha: &ClassVector) -> Result<bool> {
        let l = self.model.lattice();
        if alpha.len() != 2 {
            return Err(Error::Malformed("ruled classes have two coordinates".into()));
        }
        let k = int(self.k as i64);
        // recover coordinates through the pairing so the check is basis-honest
        let cp = l.pair(alpha, &ClassVector::from_ints(&[1, 0]))? / &k;
        let cm = -l.pair(alpha, &ClassVector::from_ints(&[0, 1]))? / &k;
        Ok(self
            .conditions()
            .iter()
            .all(|[p, q]| (p * &cp + q * &cm).is_positive()))
    }

    /// The maximal open `t`-interval on the line
    /// `t ↦ (a/k)·s⁺ + (t − a/k)·s⁻` where the predicate holds, intersected
    /// with `t > 0`. Cross-checked against `(0, 2a/h)`.
    pub fn inflation_interval(&self, a: &Rational) -> Result<OpenInterval> {
        if !a.is_positive() {
            return Err(Error::Precondition("area must be positive".into()));
        }
        let k = int(self.k as i64);
        let cp = a / &k;
        let mut lo = Rational::zero();
        let mut hi: Option<Rational> = None;
        for [p, q] in self.conditions() {
            // p·cp + q·(t − cp) > 0  ⇔  c0 + q·t > 0
            let c0 = &p * &cp - &q * &cp;
            if q.is_zero() {
                if !c0.is_positive() {
                    return Err(Error::PropertyViolation("empty inflation interval".into()));
                }
            } else if q.is_positive() {
                let root = -&c0 / &q;
                if root > lo {
                    lo = root;
                }
            } else {
                let root = -&c0 / &q;
                hi = Some(match hi {
                    Some(h) if h < root => h,
                    _ => root,
                });
            }
        }
        let out = OpenInterval { lo, hi };
        let h = h_param(self.k as i64, self.base_genus)?;
        let expected = OpenInterval {
            lo: Rational::zero(),
            hi: Some(int(2) * a / int(h)),
        };
        if out != expected {
            return Err(Error::PropertyViolation(format!(
                "interval {out} disagrees with {expected}"
            )));
        }
        Ok(out)
    }
}

pub fn build_ruled_model(base_genus: u32, k: u32, parity: Parity) -> Result<CurveModel> {
    RuledModel::new(base_genus, k, parity).map(RuledModel::into_curve_model)
}

pub fn ruled_symplectic_predicate(m: &RuledModel, alpha: &ClassVector) -> Result<bool> {
    m.symplectic_predicate(alpha)
}

pub fn ruled_inflation_interval(m: &RuledModel, a: &Rational) -> Result<OpenInterval> {
    m.inflation_interval(a)
}

// ---------------------------------------------------------------- Hesse

/// Blow-up of the plane at the twelve triple points of nine lines.
#[derive(Debug, Clone)]
pub struct HesseDual {
    pub triples: Vec<[u8; 3]>,
    pub lattice: IntersectionLattice,
    /// Strict transforms `L′_1 … L′_9`.
    pub lines: Vec<ClassVector>,
}

impl HesseDual {
    pub fn triples_through(&self, i: u8) -> Vec<&[u8; 3]> {
        self.triples.iter().filter(|t| t.contains(&i)).collect()
    }

    pub fn triples_through_pair(&self, i: u8, j: u8) -> Vec<&[u8; 3]> {
        self.triples
            .iter()
            .filter(|t| t.contains(&i) && t.contains(&j))
            .collect()
    }

    pub fn curve_model(&self) -> Result<CurveModel> {
        let n = self.lattice.rank();
        let mut curves: Vec<CurveData> = self
            .lines
            .iter()
            .enumerate()
            .map(|(i, c)| CurveData::new(format!("L{}", i + 1), c.clone(), 0))
            .collect();
        for (j, t) in self.triples.iter().enumerate() {
            curves.push(CurveData::new(
                format!("E{}", triple_name(t)),
                ClassVector::unit(n, j + 1),
                0,
            ));
        }
        // other negative curves exist on this blow-up, so Kähler claims are refused
        Ok(CurveModel::new(self.lattice.clone(), curves, false)?.with_metadata("family", "hesse"))
    }
}

pub fn build_hesse_dual() -> Result<HesseDual> {
    let n = 1 + HESSE_TRIPLES.len();
    let mut gram = vec![vec![0i64; n]; n];
    gram[0][0] = 1;
    for (i, row) in gram.iter_mut().enumerate().skip(1) {
        row[i] = -1;
    }
    let mut labels = vec!["H".to_string()];
    labels.extend(HESSE_TRIPLES.iter().map(|t| format!("E{}", triple_name(t))));
    let mut canonical = vec![int(1); n];
    canonical[0] = int(-3);
    let lattice = IntersectionLattice::new(gram, labels)?
        .with_canonical_class(ClassVector::new(canonical))?
        .with_reference_class(ClassVector::unit(n, 0))?;
    let lines: Vec<ClassVector> = (1..=9u8)
        .map(|i| {
            let mut v = vec![int(0); n];
            v[0] = int(1);
            for (j, t) in HESSE_TRIPLES.iter().enumerate() {
                if t.contains(&i) {
                    v[j + 1] = int(-1);
                }
            }
            ClassVector::new(v)
        })
        .collect();
    let h = HesseDual {
        triples: HESSE_TRIPLES.to_vec(),
        lattice,
        lines,
    };
    for i in 1..=9u8 {
        if h.triples_through(i).len() != 4 {
            return Err(build_err(&format!("index {i} is not on four triples")));
        }
        for j in i + 1..=9 {
            if h.triples_through_pair(i, j).len() != 1 {
                return Err(build_err(&format!("pair {{{i},{j}}} is not on exactly one triple")));
            }
        }
    }
    for (i, a) in h.lines.iter().enumerate() {
        for (j, b) in h.lines.iter().enumerate() {
            let want = if i == j { int(-3) } else { int(0) };
            if h.lattice.pair(a, b)? != want {
                return Err(build_err("strict transforms have the wrong pairing"));
            }
        }
    }
    Ok(h)
}

// ---------------------------------------------------------------- ball quotient

pub fn kk_curve_labels() -> Vec<String> {
    let mut labels: Vec<String> = (1..=9).map(|i| format!("C{i}")).collect();
    labels.extend(HESSE_TRIPLES.iter().map(|t| format!("D{}", triple_name(t))));
    labels
}

fn kk_lattice(extended: bool, w0_square: i64) -> Result<IntersectionLattice> {
    let n = 21 + usize::from(extended);
    let mut gram = vec![vec![0i64; n]; n];
    for i in 0..9 {
        gram[i][i] = -3;
    }
    for (j, t) in HESSE_TRIPLES.iter().enumerate() {
        let d = 9 + j;
        gram[d][d] = -1;
        for &l in t {
            let c = (l - 1) as usize;
            gram[c][d] = 1;
            gram[d][c] = 1;
        }
    }
    let mut labels = kk_curve_labels();
    if extended {
        gram[21][21] = w0_square;
        labels.push("w0".into());
    }
    let mut k = vec![ratio(7, 3); 9];
    k.extend(std::iter::repeat_n(int(4), 12));
    if extended {
        k.push(int(0));
    }
    let canonical = ClassVector::new(k);
    let reference = if extended {
        ClassVector::unit(n, 21)
    } else {
        canonical.clone()
    };
    IntersectionLattice::new(gram, labels)?
        .with_canonical_class(canonical)?
        .with_reference_class(reference)
}

fn kk_curves(l: &IntersectionLattice, labels: &[String]) -> Vec<CurveData> {
    labels
        .iter()
        .map(|label| {
            let genus = if label.starts_with('C') { 4 } else { 2 };
            CurveData::new(label.clone(), l.basis_vector(label).expect("label exists"), genus)
        })
        .collect()
}

fn with_kk_metadata(m: CurveModel) -> CurveModel {
    m.with_metadata("family", "kk")
        .with_metadata("euler_characteristic", "111")
        .with_metadata("ball_quotient", "true")
        .with_metadata("rigid", "true")
}

/// `ω₀² = 100`, chosen so the Γ₀ replay runs at scale 1.
pub const W0_SQUARE: i64 = 100;

/// The 21-curve model; `extended` adds an ambient class `w0` orthogonal to
/// every curve.
pub fn build_kk_model(extended: bool) -> Result<CurveModel> {
    let l = kk_lattice(extended, W0_SQUARE)?;
    let k = l.canonical_class().expect("set above").clone();
    if l.square(&k)? != int(333) {
        return Err(build_err("K·K is not 333"));
    }
    let curves = kk_curves(&l, &kk_curve_labels());
    for c in &curves {
        let want = if c.label.starts_with('C') { int(9) } else { int(3) };
        if l.pair(&k, &c.class)? != want {
            return Err(build_err(&format!("K·{} has the wrong value", c.label)));
        }
    }
    let m = CurveModel::new(l, curves, true).map_err(|e| build_err(&e.to_string()))?;
    Ok(with_kk_metadata(m))
}

/// Labels of the Γ₀ path `C1 – D123 – C2 – D249` in path order.
pub const GAMMA0: [&str; 4] = ["C1", "D123", "C2", "D249"];

/// The extended lattice with only the four Γ₀ curves declared.
pub fn kk_gamma0_model() -> Result<CurveModel> {
    let l = kk_lattice(true, W0_SQUARE)?;
    let labels: Vec<String> = GAMMA0.iter().map(|s| s.to_string()).collect();
    let curves = kk_curves(&l, &labels);
    let m = CurveModel::new(l, curves, true).map_err(|e| build_err(&e.to_string()))?;
    Ok(with_kk_metadata(m).with_metadata("declared_curves", "gamma0"))
}

fn combo(l: &IntersectionLattice, terms: &[(Rational, &str)]) -> ClassVector {
    let mut v = ClassVector::zeros(l.rank());
    for (c, label) in terms {
        v = v.plus_scaled(c, &l.basis_vector(label).expect("label exists"));
    }
    v
}

/// The smooth-and-inflate sequence that carries
/// `ω₀ − t(8C1 + 21D123 + 12C2 + 14D249)` back to `ω₀`.
pub fn kk_gamma0_certificate(t_scale: &Rational) -> Result<Certificate> {
    if !t_scale.is_positive() {
        return Err(Error::Precondition("t_scale must be positive".into()));
    }
    let model = kk_gamma0_model()?;
    let l = model.lattice();
    let t = t_scale;
    let base = combo(
        l,
        &[
            (Rational::one(), "w0"),
            (-t * int(8), "C1"),
            (-t * int(21), "D123"),
            (-t * int(12), "C2"),
            (-t * int(14), "D249"),
        ],
    );
    if !model.is_kahler(&base)? {
        return Err(Error::Precondition(format!(
            "base class has square {} and is not Kähler at t_scale {}",
            format_rational(&l.square(&base)?),
            format_rational(t)
        )));
    }
    let s = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let moves = vec![
        Move::Smooth {
            constituents: s(&["D123", "C1"]),
            reinstate: s(&["D123"]),
            new_id: "Ctilde".into(),
        },
        Move::Smooth {
            constituents: s(&["C2", "Ctilde", "D123", "D249"]),
            reinstate: s(&["C2", "D123", "D249"]),
            new_id: "S".into(),
        },
        Move::Inflate {
            object: "S".into(),
            t: t * int(8),
        },
        Move::Smooth {
            constituents: s(&["D123", "C2", "D249"]),
            reinstate: s(&["D123", "D249"]),
            new_id: "Sprime".into(),
        },
        Move::Inflate {
            object: "Sprime".into(),
            t: t * int(4),
        },
        Move::Inflate {
            object: "D123".into(),
            t: t.clone(),
        },
        Move::Inflate {
            object: "D249".into(),
            t: t * int(2),
        },
    ];
    Ok(Certificate {
        model: ModelRef::Builtin("kk-gamma0".into()),
        base_class: base,
        initial_objects: None,
        moves,
        target_class: l.basis_vector("w0").expect("extended"),
        annotations: vec![ITERATED_DISJOIN.to_string()],
    })
}

/// `ω₀ + 3K`, positive on all 21 curves of the extended model.
pub fn kk_interior_class(model: &CurveModel) -> Result<ClassVector> {
    let l = model.lattice();
    let w0 = l
        .basis_vector("w0")
        .ok_or_else(|| Error::Configuration("model has no w0 direction".into()))?;
    let k = l
        .canonical_class()
        .ok_or_else(|| Error::Configuration("model has no canonical class".into()))?;
    Ok(w0.plus_scaled(&int(3), k))
}

// ---------------------------------------------------------------- fixtures

/// Six `(−2)`-spheres in the E6 shape plus an orthogonal positive class `h`.
pub fn build_e6_model() -> Result<CurveModel> {
    // e1 – e2 – e3 – e4 – e5, with e6 hanging off e3
    let edges = [(1, 2), (2, 3), (3, 4), (4, 5), (3, 6)];
    let n = 7;
    let mut gram = vec![vec![0i64; n]; n];
    gram[0][0] = 1;
    for (i, row) in gram.iter_mut().enumerate().skip(1) {
        row[i] = -2;
    }
    for (a, b) in edges {
        gram[a][b] = 1;
        gram[b][a] = 1;
    }
    let mut labels = vec!["h".to_string()];
    labels.extend((1..=6).map(|i| format!("e{i}")));
    let l = IntersectionLattice::new(gram, labels)?
        .with_canonical_class(ClassVector::zeros(n))?
        .with_reference_class(ClassVector::unit(n, 0))?;
    let curves = (1..=6)
        .map(|i| CurveData::new(format!("e{i}"), ClassVector::unit(n, i), 0))
        .collect();
    Ok(CurveModel::new(l, curves, true)?.with_metadata("family", "e6"))
}

pub const BUILTIN_NAMES: [&str; 6] = ["kk", "kk-extended", "kk-gamma0", "hesse", "ruled", "e6"];

/// Resolve a built-in model name. `ruled` alone is the genus-0, `k = 3`
/// nontrivial model; `ruled-G-K-PARITY` selects any other.
pub fn builtin_model(name: &str) -> Result<CurveModel> {
    match name {
        "kk" => build_kk_model(false),
        "kk-extended" => build_kk_model(true),
        "kk-gamma0" => kk_gamma0_model(),
        "hesse" => build_hesse_dual()?.curve_model(),
        "ruled" => build_ruled_model(0, 3, Parity::Nontrivial),
        "e6" => build_e6_model(),
        _ => {
            if let Some(rest) = name.strip_prefix("ruled-") {
                let parts: Vec<&str> = rest.split('-').collect();
                if let [g, k, p] = parts[..] {
                    let g = g.parse().map_err(|_| Error::Malformed(format!("bad genus in `{name}`")))?;
                    let k = k.parse().map_err(|_| Error::Malformed(format!("bad k in `{name}`")))?;
                    return build_ruled_model(g, k, p.parse()?);
                }
            }
            Err(Error::Malformed(format!(
                "unknown built-in model `{name}` (known: {}, ruled-G-K-PARITY)",
                BUILTIN_NAMES.join(", ")
            )))
        }
    }
}

/// Count of (line, point) incidences from both sides.
pub fn hesse_incidence_counts(h: &HesseDual) -> (usize, usize) {
    let by_lines: usize = (1..=9u8).map(|i| h.triples_through(i).len()).sum();
    let mut by_points: BTreeMap<&[u8; 3], usize> = BTreeMap::new();
    for t in &h.triples {
        *by_points.entry(t).or_default() += t.len();
    }
    (by_lines, by_points.values().sum())
}
