//! Certificate planning: dual graphs, Dynkin shapes, obstruction witnesses,
//! and a recipe-first, search-second planner.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::chambers::{partition, CurveModel, MembershipTag};
use crate::error::{Error, Result};
use crate::lattice::{inverse, is_negative_definite, neg_inverse, ClassVector, SquareMatrix};
use crate::moves::{verify_with_model, Certificate, ConfigurationState, ModelRef, Move, EXTRAPOLATED, ITERATED_DISJOIN};
use crate::rational::{format_rational, halve, int, to_i64, Rational};

/// Curves as vertices, pairings as edge multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    pub vertices: Vec<usize>,
    pub labels: Vec<String>,
    pub squares: Vec<i64>,
    pub genera: Vec<u32>,
    pub mult: Vec<Vec<i64>>,
}

impl DualGraph {
    pub fn from_model(model: &CurveModel, vertices: &[usize]) -> Result<Self> {
        let l = model.lattice();
        let n = vertices.len();
        let mut mult = vec![vec![0i64; n]; n];
        let mut squares = Vec::with_capacity(n);
        for (a, &i) in vertices.iter().enumerate() {
            let ci = &model
                .curves()
                .get(i)
                .ok_or_else(|| Error::Malformed(format!("curve index {i} out of range")))?
                .class;
            for (b, &j) in vertices.iter().enumerate() {
                let p = to_i64(&l.pair(ci, &model.curves()[j].class)?)
                    .ok_or_else(|| Error::Malformed("pairing out of range".into()))?;
                if a == b {
                    squares.push(p);
                } else {
                    mult[a][b] = p;
                }
            }
        }
        Ok(DualGraph {
            vertices: vertices.to_vec(),
            labels: vertices.iter().map(|&i| model.curves()[i].label.clone()).collect(),
            squares,
            genera: vertices.iter().map(|&i| model.curves()[i].genus).collect(),
            mult,
        })
    }

    /// Abstract graph on `n` vertices; every vertex a `(−2)`-sphere.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut mult = vec![vec![0i64; n]; n];
        for &(a, b) in edges {
            mult[a][b] += 1;
            mult[b][a] += 1;
        }
        DualGraph {
            vertices: (0..n).collect(),
            labels: (0..n).map(|i| format!("v{i}")).collect(),
            squares: vec![-2; n],
            genera: vec![0; n],
            mult,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn degree(&self, a: usize) -> usize {
        (0..self.len()).filter(|&b| b != a && self.mult[a][b] > 0).count()
    }

    /// Connected components, as sorted local index lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(a) = queue.pop_front() {
                for b in 0..n {
                    if !seen[b] && a != b && self.mult[a][b] > 0 {
                        seen[b] = true;
                        comp.push(b);
                        queue.push_back(b);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Gram of the same graph with every vertex decorated `−2`.
    pub fn minus_two_gram(&self) -> SquareMatrix {
        SquareMatrix::from_fn(self.len(), |a, b| {
            if a == b {
                int(-2)
            } else {
                int(self.mult[a][b])
            }
        })
    }

    fn is_minus_two_spheres(&self) -> bool {
        self.squares.iter().all(|&s| s == -2) && self.genera.iter().all(|&g| g == 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DynkinType {
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
    NotADE,
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A_{n}"),
            DynkinType::D(n) => write!(f, "D_{n}"),
            DynkinType::E6 => f.write_str("E6"),
            DynkinType::E7 => f.write_str("E7"),
            DynkinType::E8 => f.write_str("E8"),
            DynkinType::NotADE => f.write_str("not ADE"),
        }
    }
}

/// Classify a simple tree by its shape.
pub fn dynkin_classify(g: &DualGraph) -> DynkinType {
    let n = g.len();
    if n == 0 || g.components().len() != 1 {
        return DynkinType::NotADE;
    }
    let mut edges = 0;
    for a in 0..n {
        for b in a + 1..n {
            match g.mult[a][b] {
                0 => {}
                1 => edges += 1,
                _ => return DynkinType::NotADE,
            }
        }
    }
    if edges != n - 1 {
        return DynkinType::NotADE;
    }
    let degrees: Vec<usize> = (0..n).map(|a| g.degree(a)).collect();
    let branch: Vec<usize> = (0..n).filter(|&a| degrees[a] >= 3).collect();
    match branch[..] {
        [] => DynkinType::A(n),
        [c] if degrees[c] == 3 => {
            let mut legs: Vec<usize> = (0..n)
                .filter(|&b| b != c && g.mult[c][b] > 0)
                .map(|start| {
                    // walk away from the centre until the leg ends
                    let (mut prev, mut cur, mut len) = (c, start, 1);
                    loop {
                        let next = (0..n).find(|&x| x != prev && x != cur && g.mult[cur][x] > 0);
                        match next {
                            Some(x) => {
                                prev = cur;
                                cur = x;
                                len += 1;
                            }
                            None => break len,
                        }
                    }
                })
                .collect();
            legs.sort_unstable();
            match legs[..] {
                [1, 1, m] => DynkinType::D(m + 3),
                [1, 2, 2] => DynkinType::E6,
                [1, 2, 3] => DynkinType::E7,
                [1, 2, 4] => DynkinType::E8,
                _ => DynkinType::NotADE,
            }
        }
        _ => DynkinType::NotADE,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    Admissible,
    /// Non-negative, non-zero integer combination with `w·w ≥ 0`.
    Witness(Vec<BigInt>),
}

/// Vectors visited by the small-coefficient enumeration before falling back.
pub const ENUMERATION_CAP: usize = 200_000;

pub fn component_obstruction(model: &CurveModel, component: &[usize]) -> Result<Obstruction> {
    let g = DualGraph::from_model(model, component)?;
    if g.components().len() > 1 {
        return Err(Error::Precondition("component is not connected".into()));
    }
    let m = model.gram_restriction(component)?;
    if is_negative_definite(&m)? {
        return Ok(Obstruction::Admissible);
    }
    let ints: Vec<Vec<i128>> = (0..g.len())
        .map(|a| {
            (0..g.len())
                .map(|b| if a == b { g.squares[a] as i128 } else { g.mult[a][b] as i128 })
                .collect()
        })
        .collect();
    if let Some(w) = enumerate_witness(&ints, 4, ENUMERATION_CAP) {
        return Ok(Obstruction::Witness(w.into_iter().map(BigInt::from).collect()));
    }
    if let Some(w) = schur_witness(&m) {
        return Ok(Obstruction::Witness(w));
    }
    let minors: Vec<String> = m.leading_principal_minors().iter().map(format_rational).collect();
    Err(Error::SearchFailure(format!(
        "no witness found; leading minors [{}]",
        minors.join(", ")
    )))
}

fn quad(m: &[Vec<i128>], w: &[i64]) -> i128 {
    let mut acc = 0i128;
    for (a, row) in m.iter().enumerate() {
        if w[a] == 0 {
            continue;
        }
        for (b, &x) in row.iter().enumerate() {
            acc += x * w[a] as i128 * w[b] as i128;
        }
    }
    acc
}

/// First `w ∈ {0..=max}ⁿ \ {0}` with `wᵀMw ≥ 0`, by increasing coefficient sum.
fn enumerate_witness(m: &[Vec<i128>], max: i64, cap: usize) -> Option<Vec<i64>> {
    let n = m.len();
    let mut budget = cap;
    let mut w = vec![0i64; n];
    fn rec(m: &[Vec<i128>], w: &mut Vec<i64>, pos: usize, left: i64, max: i64, budget: &mut usize) -> Option<Vec<i64>> {
        if *budget == 0 {
            return None;
        }
        if pos == w.len() {
            if left != 0 {
                return None;
            }
            *budget -= 1;
            return (quad(m, w) >= 0).then(|| w.clone());
        }
        let remaining = (w.len() - pos - 1) as i64;
        let lo = (left - remaining * max).max(0);
        for c in (lo..=left.min(max)).rev() {
            w[pos] = c;
            if let Some(found) = rec(m, w, pos + 1, left - c, max, budget) {
                return Some(found);
            }
        }
        w[pos] = 0;
        None
    }
    for total in 1..=(max * n as i64) {
        if let Some(found) = rec(m, &mut w, 0, total, max, &mut budget) {
            return Some(found);
        }
        if budget == 0 {
            break;
        }
    }
    None
}

/// Exact witness from the first leading block whose minor breaks the sign
/// pattern: its Schur-complement vector `x` has `xᵀMx ≥ 0`, and with
/// non-negative off-diagonals so does `|x|`.
fn schur_witness(m: &SquareMatrix) -> Option<Vec<BigInt>> {
    let n = m.dim();
    if (0..n).any(|a| (0..n).any(|b| a != b && m.get(a, b).is_negative())) {
        return None;
    }
    let minors = m.leading_principal_minors();
    let k = minors.iter().enumerate().position(|(i, d)| {
        let want_negative = i % 2 == 0;
        if want_negative {
            !d.is_negative()
        } else {
            !d.is_positive()
        }
    })?;
    let mut x = vec![Rational::zero(); n];
    x[k] = Rational::one();
    if k > 0 {
        let inv = inverse(&m.leading(k))?;
        let col: Vec<Rational> = (0..k).map(|i| m.get(i, k).clone()).collect();
        let y = inv.mul_vec(&col);
        for i in 0..k {
            x[i] = -&y[i];
        }
    }
    let w: Vec<Rational> = x.iter().map(|v| v.abs()).collect();
    if m.quadratic_form(&w).is_negative() {
        return None;
    }
    let l = w.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    Some(w.iter().map(|v| v.numer() * (&l / v.denom())).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanOutcome {
    Certificate(Box<Certificate>),
    Unsupported {
        reason: String,
        /// Obstruction witness over the curves named in `witness_labels`.
        witness: Option<Vec<BigInt>>,
        witness_labels: Vec<String>,
    },
}

impl PlanOutcome {
    fn unsupported(reason: impl Into<String>) -> Self {
        PlanOutcome::Unsupported {
            reason: reason.into(),
            witness: None,
            witness_labels: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_depth: usize,
    pub branching: usize,
    pub node_budget: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_depth: 12,
            branching: 8,
            node_budget: 50_000,
        }
    }
}

pub fn plan(model: &CurveModel, target: &ClassVector) -> Result<PlanOutcome> {
    plan_with(model, target, SearchLimits::default())
}

struct Component {
    /// Curve indices into the model.
    curves: Vec<usize>,
    kind: DynkinType,
}

pub fn plan_with(model: &CurveModel, target: &ClassVector, limits: SearchLimits) -> Result<PlanOutcome> {
    let p = partition(model, target)?;
    if !model.completeness_assumed() {
        return Ok(PlanOutcome::unsupported(
            "model does not assume its curve list is complete, so no base class can be certified Kähler",
        ));
    }
    match p.tag {
        MembershipTag::InteriorKahler => {
            return Ok(PlanOutcome::Certificate(Box::new(Certificate {
                model: ModelRef::inline(model),
                base_class: target.clone(),
                initial_objects: None,
                moves: Vec::new(),
                target_class: target.clone(),
                annotations: Vec::new(),
            })))
        }
        MembershipTag::MixedBoundary => {
            return Ok(PlanOutcome::unsupported(
                "mixed-boundary class: vanishes on some curves and is negative on others",
            ))
        }
        MembershipTag::Corner | MembershipTag::Chamber => {}
    }
    let g_set = p.vanishing_set.clone();
    let graph = DualGraph::from_model(model, &g_set)?;
    let mut comps = Vec::new();
    for local in graph.components() {
        let curves: Vec<usize> = local.iter().map(|&a| g_set[a]).collect();
        if let Obstruction::Witness(w) = component_obstruction(model, &curves)? {
            let labels: Vec<String> = curves.iter().map(|&i| model.curves()[i].label.clone()).collect();
            let wq: Vec<Rational> = w.iter().map(|x| Rational::from_integer(x.clone())).collect();
            let sq = model.gram_restriction(&curves)?.quadratic_form(&wq);
            return Ok(PlanOutcome::Unsupported {
                reason: format!(
                    "vanishing set is not admissible: a combination of {} curves has square {} ≥ 0",
                    labels.len(),
                    format_rational(&sq)
                ),
                witness: Some(w),
                witness_labels: labels,
            });
        }
        let sub = DualGraph::from_model(model, &curves)?;
        let kind = dynkin_classify(&sub);
        if matches!(kind, DynkinType::E6 | DynkinType::E7 | DynkinType::E8) && sub.is_minus_two_spheres() {
            return Ok(PlanOutcome::unsupported(format!("{kind} excluded")));
        }
        if curves.len() == 1 {
            let i = curves[0];
            let c = &model.curves()[i];
            let k = model.curve_k(i)?;
            let v = &p.pairings[i];
            if c.genus == 0 && k.numer().is_odd() {
                if k == int(1) {
                    return Ok(PlanOutcome::unsupported(format!(
                        "sphere of odd square −1 (`{}`): inflation stops short of its wall",
                        c.label
                    )));
                }
                if v.is_negative() {
                    return Ok(PlanOutcome::unsupported(format!(
                        "sphere of odd square −{} (`{}`): crossing its wall by {} needs base area A > {}, reachable only when t < 2A/{} leaves room",
                        format_rational(&k),
                        c.label,
                        format_rational(&-v),
                        format_rational(&(-v * (&k + int(1)) / (&k - int(1)))),
                        format_rational(&(&k + int(1)))
                    )));
                }
            }
        }
        comps.push(Component { curves, kind });
    }

    let m = model.gram_restriction(&g_set)?;
    let neg_inv = neg_inverse(&m)?;
    let v: Vec<Rational> = g_set.iter().map(|&i| p.pairings[i].clone()).collect();
    let ones = vec![Rational::one(); g_set.len()];
    let directions = [ones.clone(), m.mul_vec(&ones).iter().map(|x| -x).collect::<Vec<_>>()];
    let scales: Vec<Rational> = if p.tag == MembershipTag::Corner {
        (0..=64).map(|n| halve(&Rational::one(), n)).collect()
    } else {
        (-16i32..=16)
            .rev()
            .map(|e| if e >= 0 { int(1i64 << e) } else { halve(&Rational::one(), (-e) as u32) })
            .collect()
    };
    let mut annotations = BTreeSet::new();
    if comps.iter().any(|c| matches!(c.kind, DynkinType::D(_))) {
        annotations.insert(EXTRAPOLATED.to_string());
    }
    for dir in &directions {
        let mut attempts = 0;
        for r in &scales {
            let shifted: Vec<Rational> = dir.iter().zip(&v).map(|(u, vi)| r * u - vi).collect();
            let t = neg_inv.mul_vec(&shifted);
            let mut base = target.clone();
            for (ti, &i) in t.iter().zip(&g_set) {
                base = base.plus_scaled(&-ti, &model.curves()[i].class);
            }
            if !model.is_kahler(&base)? {
                continue;
            }
            attempts += 1;
            if let Some(cert) = assemble(model, &base, target, &g_set, &t, &comps, &annotations, limits) {
                return Ok(PlanOutcome::Certificate(Box::new(cert)));
            }
            if attempts >= 4 {
                break;
            }
        }
    }
    Ok(PlanOutcome::unsupported("no certificate found within the search limits"))
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    model: &CurveModel,
    base: &ClassVector,
    target: &ClassVector,
    g_set: &[usize],
    t: &[Rational],
    comps: &[Component],
    annotations: &BTreeSet<String>,
    limits: SearchLimits,
) -> Option<Certificate> {
    let objects = model
        .curves()
        .iter()
        .map(|c| (c.label.clone(), c.class.clone(), c.genus));
    let mut state = ConfigurationState::new(model.lattice_arc(), base.clone(), objects).ok()?;
    let mut moves = Vec::new();
    let mut fresh = 0usize;
    for comp in comps {
        let defect: Vec<Rational> = comp
            .curves
            .iter()
            .map(|i| t[g_set.iter().position(|j| j == i).expect("in G")].clone())
            .collect();
        let found = component_recipe(model, &state, comp, &defect)
            .or_else(|| component_search(model, &state, comp, &defect, limits, &mut fresh))?;
        state = found.0;
        moves.extend(found.1);
    }
    let mut notes = annotations.clone();
    if moves
        .iter()
        .any(|m| matches!(m, Move::Smooth { reinstate, .. } if reinstate.len() > 1))
    {
        notes.insert(ITERATED_DISJOIN.to_string());
    }
    let cert = Certificate {
        model: ModelRef::inline(model),
        base_class: base.clone(),
        initial_objects: None,
        moves,
        target_class: target.clone(),
        annotations: notes.into_iter().collect(),
    };
    verify_with_model(&cert, model).passed.then_some(cert)
}

fn run(state: &ConfigurationState, moves: &[Move]) -> Option<ConfigurationState> {
    let mut s = state.clone();
    for m in moves {
        s = s.apply(m).ok()?;
        if !s.lattice().is_positive_cone(s.current_class()).ok()? {
            return None;
        }
    }
    Some(s)
}

/// Closed-form recipes: single curves, and the `(−3, −1, −3, −1)` path.
fn component_recipe(
    model: &CurveModel,
    state: &ConfigurationState,
    comp: &Component,
    defect: &[Rational],
) -> Option<(ConfigurationState, Vec<Move>)> {
    let label = |i: usize| model.curves()[i].label.clone();
    if comp.curves.len() == 1 {
        let moves = vec![Move::Inflate {
            object: label(comp.curves[0]),
            t: defect[0].clone(),
        }];
        return run(state, &moves).map(|s| (s, moves));
    }
    if comp.kind != DynkinType::A(4) {
        return None;
    }
    let graph = DualGraph::from_model(model, &comp.curves).ok()?;
    // order the path from an end whose square is −3
    let end = (0..4).find(|&a| graph.degree(a) == 1 && graph.squares[a] == -3)?;
    let mut order = vec![end];
    while order.len() < 4 {
        let last = *order.last().expect("non-empty");
        let next = (0..4).find(|&b| !order.contains(&b) && graph.mult[last][b] > 0)?;
        order.push(next);
    }
    if order.iter().map(|&a| graph.squares[a]).collect::<Vec<_>>() != [-3, -1, -3, -1] {
        return None;
    }
    let [c1, b1, c2, b2] = [order[0], order[1], order[2], order[3]];
    let (tc1, tb1, tc2, tb2) = (&defect[c1], &defect[b1], &defect[c2], &defect[b2]);
    let s1 = tc1.clone();
    let s2 = tc2 - tc1;
    let s3 = tb1 - int(2) * &s1 - &s2;
    let s4 = tb2 - &s1 - &s2;
    let n = |a: usize| label(comp.curves[a]);
    let fresh = |base: &str| {
        let mut name = base.to_string();
        while state.object(&name).is_some() {
            name.push('\'');
        }
        name
    };
    let ctilde = fresh(&format!("{}+{}", n(c1), n(b1)));
    let s = fresh(&format!("S[{}]", n(c1)));
    let sp = fresh(&format!("S'[{}]", n(c1)));
    let mut moves = vec![
        Move::Smooth {
            constituents: vec![n(b1), n(c1)],
            reinstate: vec![n(b1)],
            new_id: ctilde.clone(),
        },
        Move::Smooth {
            constituents: vec![n(c2), ctilde, n(b1), n(b2)],
            reinstate: vec![n(c2), n(b1), n(b2)],
            new_id: s.clone(),
        },
        Move::Inflate { object: s, t: s1 },
        Move::Smooth {
            constituents: vec![n(b1), n(c2), n(b2)],
            reinstate: vec![n(b1), n(b2)],
            new_id: sp.clone(),
        },
        Move::Inflate { object: sp, t: s2 },
    ];
    for (obj, t) in [(n(b1), s3), (n(b2), s4)] {
        if !t.is_zero() {
            moves.push(Move::Inflate { object: obj, t });
        }
    }
    run(state, &moves).map(|s| (s, moves))
}

struct Search<'a> {
    comp_len: usize,
    limits: SearchLimits,
    nodes: usize,
    visited: BTreeSet<String>,
    fresh: &'a mut usize,
}

type Coeffs = BTreeMap<String, Vec<Rational>>;

impl Search<'_> {
    fn key(&self, state: &ConfigurationState, coeffs: &Coeffs, d: &[Rational]) -> String {
        let mut live: Vec<String> = coeffs
            .iter()
            .filter(|(id, _)| state.object(id).is_some_and(|o| o.alive))
            .map(|(_, c)| c.iter().map(format_rational).collect::<Vec<_>>().join(","))
            .collect();
        live.sort();
        let d: Vec<String> = d.iter().map(format_rational).collect();
        format!("{}|{}", live.join(";"), d.join(","))
    }

    fn new_id(&mut self, state: &ConfigurationState) -> String {
        loop {
            *self.fresh += 1;
            let id = format!("X{}", *self.fresh);
            if state.object(&id).is_none() {
                return id;
            }
        }
    }

    fn candidates(&mut self, state: &ConfigurationState, coeffs: &Coeffs, d: &[Rational]) -> Vec<Move> {
        let l = state.lattice();
        let live: Vec<&String> = coeffs
            .keys()
            .filter(|id| state.object(id).is_some_and(|o| o.alive))
            .collect();
        let mut out = Vec::new();
        for id in &live {
            let c = &coeffs[*id];
            let mut t: Option<Rational> = None;
            for (ci, di) in c.iter().zip(d) {
                if ci.is_positive() {
                    let r = di / ci;
                    t = Some(match t {
                        Some(x) if x < r => x,
                        _ => r,
                    });
                }
            }
            if let Some(t) = t.filter(Rational::is_positive) {
                out.push(Move::Inflate {
                    object: (*id).clone(),
                    t,
                });
            }
        }
        let mut sets: BTreeSet<Vec<String>> = BTreeSet::new();
        let meets = |a: &str, b: &str| state.geom(a, b).is_some_and(|g| g.is_positive());
        for y in &live {
            let mut star: Vec<String> = live
                .iter()
                .filter(|z| *z == y || meets(y, z))
                .map(|z| (*z).clone())
                .collect();
            star.sort();
            if star.len() >= 2 {
                sets.insert(star);
            }
            for z in &live {
                if y < z && meets(y, z) {
                    sets.insert(vec![(*y).clone(), (*z).clone()]);
                }
            }
        }
        for set in sets {
            let mut sum = ClassVector::zeros(l.rank());
            for id in &set {
                sum = &sum + &state.object(id).expect("live").class;
            }
            let reinstate: Vec<String> = set
                .iter()
                .filter(|x| {
                    let obj = state.object(x).expect("live");
                    let k = -l.square(&obj.class).unwrap_or_default();
                    let m: BigInt = set
                        .iter()
                        .filter(|y| y != x)
                        .map(|y| state.geom(x, y).cloned().unwrap_or_default())
                        .sum();
                    Rational::from_integer(m) >= k && !l.pair(&obj.class, &sum).unwrap_or_default().is_negative()
                })
                .cloned()
                .collect();
            let new_id = self.new_id(state);
            out.push(Move::Smooth {
                constituents: set,
                reinstate,
                new_id,
            });
        }
        out
    }

    fn dfs(
        &mut self,
        state: &ConfigurationState,
        coeffs: &Coeffs,
        d: &[Rational],
        depth: usize,
        path: &mut Vec<Move>,
    ) -> Option<ConfigurationState> {
        if d.iter().all(Zero::is_zero) {
            return Some(state.clone());
        }
        if depth == self.limits.max_depth || self.nodes >= self.limits.node_budget {
            return None;
        }
        self.nodes += 1;
        if !self.visited.insert(self.key(state, coeffs, d)) {
            return None;
        }
        let mut tried = 0;
        for mv in self.candidates(state, coeffs, d) {
            if tried == self.limits.branching {
                break;
            }
            let Ok(next) = state.apply(&mv) else { continue };
            if !next.lattice().is_positive_cone(next.current_class()).unwrap_or(false) {
                continue;
            }
            tried += 1;
            let mut coeffs2 = coeffs.clone();
            let mut d2 = d.to_vec();
            match &mv {
                Move::Inflate { object, t } => {
                    for (di, ci) in d2.iter_mut().zip(&coeffs[object]) {
                        *di -= t * ci;
                    }
                }
                Move::Smooth {
                    constituents, new_id, ..
                } => {
                    let mut sum = vec![Rational::zero(); self.comp_len];
                    for c in constituents {
                        for (s, x) in sum.iter_mut().zip(&coeffs[c]) {
                            *s += x;
                        }
                    }
                    coeffs2.insert(new_id.clone(), sum);
                }
                Move::InflateNonneg { .. } => continue,
            }
            path.push(mv);
            if let Some(done) = self.dfs(&next, &coeffs2, &d2, depth + 1, path) {
                return Some(done);
            }
            path.pop();
        }
        None
    }
}

/// Bounded depth-first search over smoothings and inflations.
fn component_search(
    model: &CurveModel,
    state: &ConfigurationState,
    comp: &Component,
    defect: &[Rational],
    limits: SearchLimits,
    fresh: &mut usize,
) -> Option<(ConfigurationState, Vec<Move>)> {
    let n = comp.curves.len();
    let coeffs: Coeffs = comp
        .curves
        .iter()
        .enumerate()
        .map(|(a, &i)| {
            let mut c = vec![Rational::zero(); n];
            c[a] = Rational::one();
            (model.curves()[i].label.clone(), c)
        })
        .collect();
    let mut search = Search {
        comp_len: n,
        limits,
        nodes: 0,
        visited: BTreeSet::new(),
        fresh,
    };
    let mut path = Vec::new();
    let end = search.dfs(state, &coeffs, defect, 0, &mut path)?;
    Some((end, path))
}

/// Plain big-integer witness square, for reports.
pub fn witness_square(model: &CurveModel, curves: &[usize], w: &[BigInt]) -> Result<Rational> {
    let wq: Vec<Rational> = w.iter().map(|x| Rational::from_integer(x.clone())).collect();
    Ok(model.gram_restriction(curves)?.quadratic_form(&wq))
}

/// Small helper for callers holding `i64` witnesses.
pub fn witness_from_i64(w: &[i64]) -> Vec<BigInt> {
    w.iter().map(|&x| BigInt::from(x)).collect()
}
