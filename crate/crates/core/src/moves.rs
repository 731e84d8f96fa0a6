//! The inflation move engine and the certificate replay verifier.
//!
//! States are immutable: every move returns a fresh [`ConfigurationState`].
//! Geometric intersection counts between live objects are modelled as their
//! homological pairings and are re-checked to be non-negative whenever a
//! move creates objects.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::chambers::CurveModel;
use crate::document::ModelDocument;
use crate::error::{Error, Result};
use crate::lattice::{ClassVector, IntersectionLattice};
use crate::rational::{format_rational, int, to_i64, Rational};

/// `h = k+1` for a sphere of odd square `−k`, else `h = k`.
pub fn h_param(k: i64, genus: u32) -> Result<i64> {
    if k <= 0 {
        return Err(Error::Precondition(format!("k = {k} must be positive")));
    }
    Ok(if genus == 0 && k % 2 == 1 { k + 1 } else { k })
}

/// [`h_param`] for a `k` held as a rational.
pub fn h_param_of(k: &Rational, genus: u32) -> Result<i64> {
    let k = to_i64(k).ok_or_else(|| Error::Precondition(format!("k = {} is not a small integer", format_rational(k))))?;
    h_param(k, genus)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceObject {
    pub id: String,
    pub class: ClassVector,
    pub genus: u32,
    pub alive: bool,
}

#[derive(Debug, Clone)]
pub struct ConfigurationState {
    lattice: Arc<IntersectionLattice>,
    current_class: ClassVector,
    objects: BTreeMap<String, SurfaceObject>,
    geom: BTreeMap<(String, String), BigInt>,
}

fn key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

impl ConfigurationState {
    pub fn new(
        lattice: Arc<IntersectionLattice>,
        current_class: ClassVector,
        objects: impl IntoIterator<Item = (String, ClassVector, u32)>,
    ) -> Result<Self> {
        if current_class.len() != lattice.rank() {
            return Err(Error::Malformed("current class has the wrong length".into()));
        }
        let mut state = ConfigurationState {
            lattice,
            current_class,
            objects: BTreeMap::new(),
            geom: BTreeMap::new(),
        };
        let mut fresh = Vec::new();
        for (id, class, genus) in objects {
            if class.len() != state.lattice.rank() || !class.is_integral() {
                return Err(Error::Malformed(format!("object `{id}` needs an integral class of full length")));
            }
            if state.objects.contains_key(&id) {
                return Err(Error::Malformed(format!("duplicate object id `{id}`")));
            }
            state.objects.insert(
                id.clone(),
                SurfaceObject {
                    id: id.clone(),
                    class,
                    genus,
                    alive: true,
                },
            );
            fresh.push(id);
        }
        state.refresh_geom(&fresh)?;
        Ok(state)
    }

    pub fn lattice(&self) -> &IntersectionLattice {
        &self.lattice
    }

    pub fn current_class(&self) -> &ClassVector {
        &self.current_class
    }

    pub fn objects(&self) -> impl Iterator<Item = &SurfaceObject> {
        self.objects.values()
    }

    pub fn object(&self, id: &str) -> Option<&SurfaceObject> {
        self.objects.get(id)
    }

    pub fn alive_ids(&self) -> Vec<&str> {
        self.objects.values().filter(|o| o.alive).map(|o| o.id.as_str()).collect()
    }

    /// Geometric intersection count of two distinct live objects.
    pub fn geom(&self, a: &str, b: &str) -> Option<&BigInt> {
        self.geom.get(&key(a, b))
    }

    pub fn area(&self, id: &str) -> Result<Rational> {
        let o = self.get(id)?;
        self.lattice.pair(&self.current_class, &o.class)
    }

    fn get(&self, id: &str) -> Result<&SurfaceObject> {
        self.objects
            .get(id)
            .ok_or_else(|| Error::Malformed(format!("unknown object `{id}`")))
    }

    fn live(&self, id: &str) -> Result<&SurfaceObject> {
        let o = self.get(id)?;
        if !o.alive {
            return Err(Error::Liveness(id.to_string()));
        }
        Ok(o)
    }

    fn kill(&mut self, id: &str) {
        if let Some(o) = self.objects.get_mut(id) {
            o.alive = false;
        }
        self.geom.retain(|(a, b), _| a != id && b != id);
    }

    /// Recompute `geom` rows of `ids` against every live object.
    fn refresh_geom(&mut self, ids: &[String]) -> Result<()> {
        let alive: Vec<String> = self.alive_ids().into_iter().map(String::from).collect();
        for id in ids {
            let class = self.objects[id].class.clone();
            for other in &alive {
                if other == id {
                    continue;
                }
                let p = self.lattice.pair(&class, &self.objects[other].class)?;
                if p.is_negative() {
                    return Err(Error::Positivity(format!(
                        "`{id}` and `{other}` pair to {}",
                        format_rational(&p)
                    )));
                }
                self.geom.insert(key(id, other), p.to_integer());
            }
        }
        Ok(())
    }

    /// Inflate along a negative-square object; `0 < t < 2A/h`. The object is
    /// consumed.
    pub fn inflate(&self, id: &str, t: &Rational) -> Result<ConfigurationState> {
        let o = self.live(id)?;
        let sq = self.lattice.square(&o.class)?;
        if !sq.is_negative() {
            return Err(Error::WrongMove(format!(
                "`{id}` has square {}; use inflate_nonneg",
                format_rational(&sq)
            )));
        }
        let area = self.area(id)?;
        if !area.is_positive() {
            return Err(Error::Precondition(format!(
                "`{id}` has area {} but must have positive area",
                format_rational(&area)
            )));
        }
        let h = h_param_of(&-sq, o.genus)?;
        let bound = int(2) * area / int(h);
        if !t.is_positive() || t >= &bound {
            return Err(Error::BoundViolation {
                t: t.clone(),
                bound,
            });
        }
        let mut next = self.clone();
        next.current_class = self.current_class.plus_scaled(t, &o.class);
        next.kill(id);
        Ok(next)
    }

    /// Inflate along an object of non-negative square by any `t > 0`.
    pub fn inflate_nonneg(&self, id: &str, t: &Rational) -> Result<ConfigurationState> {
        let o = self.live(id)?;
        let sq = self.lattice.square(&o.class)?;
        if sq.is_negative() {
            return Err(Error::WrongMove(format!(
                "`{id}` has square {}; use inflate",
                format_rational(&sq)
            )));
        }
        if !self.area(id)?.is_positive() {
            return Err(Error::Precondition(format!("`{id}` must have positive area")));
        }
        if !t.is_positive() {
            return Err(Error::Precondition(format!("t = {} must be positive", format_rational(t))));
        }
        let mut next = self.clone();
        next.current_class = self.current_class.plus_scaled(t, &o.class);
        Ok(next)
    }

    /// Smooth a connected configuration into one surface, then re-create a
    /// disjoint parallel copy of each object in `reinstate`.
    pub fn smooth_and_reinstate(
        &self,
        constituents: &[String],
        reinstate: &[String],
        new_id: &str,
    ) -> Result<ConfigurationState> {
        if constituents.is_empty() {
            return Err(Error::Precondition("smoothing needs at least one constituent".into()));
        }
        let set: BTreeSet<&str> = constituents.iter().map(String::as_str).collect();
        if set.len() != constituents.len() {
            return Err(Error::Malformed("repeated constituent".into()));
        }
        let rset: BTreeSet<&str> = reinstate.iter().map(String::as_str).collect();
        if rset.len() != reinstate.len() {
            return Err(Error::Malformed("repeated reinstated object".into()));
        }
        if let Some(x) = rset.iter().find(|x| !set.contains(*x)) {
            return Err(Error::Precondition(format!("reinstated `{x}` is not a constituent")));
        }
        if self.objects.contains_key(new_id) {
            return Err(Error::Precondition(format!("id `{new_id}` is already in use")));
        }
        for id in constituents {
            self.live(id)?;
            if !self.area(id)?.is_positive() {
                return Err(Error::Precondition(format!("`{id}` must have positive area")));
            }
        }
        let g = |a: &str, b: &str| self.geom(a, b).cloned().unwrap_or_default();

        let mut seen = BTreeSet::from([constituents[0].as_str()]);
        let mut queue = VecDeque::from([constituents[0].as_str()]);
        while let Some(x) = queue.pop_front() {
            for y in &set {
                if !seen.contains(y) && g(x, y).is_positive() {
                    seen.insert(y);
                    queue.push_back(y);
                }
            }
        }
        if seen.len() != set.len() {
            let missing: Vec<&str> = set.difference(&seen).copied().collect();
            return Err(Error::Connectivity(format!(
                "{} not reached from `{}`",
                missing.join(", "),
                constituents[0]
            )));
        }

        let lattice = &self.lattice;
        let mut sum = ClassVector::zeros(lattice.rank());
        for id in constituents {
            sum = &sum + &self.objects[id].class;
        }
        for x in reinstate {
            let meets: BigInt = constituents.iter().filter(|y| *y != x).map(|y| g(x, y)).sum();
            let k = -lattice.square(&self.objects[x].class)?;
            if Rational::from_integer(meets.clone()) < k {
                return Err(Error::Precondition(format!(
                    "`{x}` meets the others {meets} times but needs at least {}",
                    format_rational(&k)
                )));
            }
            let p = lattice.pair(&self.objects[x].class, &sum)?;
            if p.is_negative() {
                return Err(Error::Precondition(format!(
                    "`{x}` pairs {} with the smoothed class",
                    format_rational(&p)
                )));
            }
        }

        let mut d = BigInt::zero();
        for (i, a) in constituents.iter().enumerate() {
            for b in &constituents[i + 1..] {
                d += g(a, b);
            }
        }
        let genus_sum: BigInt = constituents.iter().map(|id| BigInt::from(self.objects[id].genus)).sum();
        let genus = genus_sum + d - BigInt::from(constituents.len() - 1);
        let genus = u32::try_from(genus).map_err(|_| Error::Precondition("genus out of range".into()))?;

        let mut next = self.clone();
        for id in constituents {
            next.kill(id);
        }
        next.objects.insert(
            new_id.to_string(),
            SurfaceObject {
                id: new_id.to_string(),
                class: sum,
                genus,
                alive: true,
            },
        );
        for x in reinstate {
            next.objects.get_mut(x).expect("constituent exists").alive = true;
        }
        let mut created = vec![new_id.to_string()];
        created.extend(reinstate.iter().cloned());
        next.refresh_geom(&created)?;
        Ok(next)
    }

    pub fn apply(&self, m: &Move) -> Result<ConfigurationState> {
        match m {
            Move::Inflate { object, t } => self.inflate(object, t),
            Move::InflateNonneg { object, t } => self.inflate_nonneg(object, t),
            Move::Smooth {
                constituents,
                reinstate,
                new_id,
            } => self.smooth_and_reinstate(constituents, reinstate, new_id),
        }
    }

    /// Areas of all live objects.
    pub fn areas(&self) -> Result<BTreeMap<String, Rational>> {
        self.alive_ids()
            .into_iter()
            .map(|id| Ok((id.to_string(), self.area(id)?)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    Inflate {
        object: String,
        t: Rational,
    },
    InflateNonneg {
        object: String,
        t: Rational,
    },
    Smooth {
        constituents: Vec<String>,
        reinstate: Vec<String>,
        new_id: String,
    },
}

impl Move {
    pub fn describe(&self) -> String {
        match self {
            Move::Inflate { object, t } => format!("inflate {object} by {}", format_rational(t)),
            Move::InflateNonneg { object, t } => {
                format!("inflate_nonneg {object} by {}", format_rational(t))
            }
            Move::Smooth {
                constituents,
                reinstate,
                new_id,
            } => format!(
                "smooth {{{}}} reinstate {{{}}} -> {new_id}",
                constituents.join(", "),
                reinstate.join(", ")
            ),
        }
    }
}

/// Where a certificate's model comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelRef {
    Builtin(String),
    Path(String),
    Inline(Box<ModelDocument>),
}

impl ModelRef {
    pub fn inline(model: &CurveModel) -> Self {
        ModelRef::Inline(Box::new(ModelDocument::from_model(model)))
    }

    /// Resolve to a model; relative paths are taken against `base_dir`.
    pub fn resolve(&self, base_dir: Option<&Path>) -> Result<CurveModel> {
        match self {
            ModelRef::Builtin(name) => crate::models::builtin_model(name),
            ModelRef::Inline(doc) => doc.to_model(),
            ModelRef::Path(p) => {
                let path = match base_dir {
                    Some(dir) if Path::new(p).is_relative() => dir.join(p),
                    _ => Path::new(p).to_path_buf(),
                };
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
                ModelDocument::parse(&text)?.to_model()
            }
        }
    }
}

pub const ITERATED_DISJOIN: &str = "iterated-disjoin";
pub const EXTRAPOLATED: &str = "extrapolated";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub model: ModelRef,
    pub base_class: ClassVector,
    /// Curve labels to start from; all model curves when absent.
    pub initial_objects: Option<Vec<String>>,
    pub moves: Vec<Move>,
    pub target_class: ClassVector,
    pub annotations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerEntry {
    /// 1-based.
    pub index: usize,
    pub description: String,
    pub class: ClassVector,
    pub square: Rational,
    pub areas: BTreeMap<String, Rational>,
    /// `2A/h` for inflations along negative curves.
    pub bound: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub passed: bool,
    /// The first failing check.
    pub failure: Option<String>,
    pub base_square: Option<Rational>,
    pub base_areas: BTreeMap<String, Rational>,
    pub ledger: Vec<LedgerEntry>,
    pub final_class: Option<ClassVector>,
    pub annotations: Vec<String>,
}

impl VerificationReport {
    fn fail(mut self, why: String) -> Self {
        self.passed = false;
        self.failure = Some(why);
        self
    }
}

fn annotations_of(cert: &Certificate) -> Vec<String> {
    let mut out: BTreeSet<String> = cert.annotations.iter().cloned().collect();
    let iterated = cert
        .moves
        .iter()
        .any(|m| matches!(m, Move::Smooth { reinstate, .. } if reinstate.len() > 1));
    if iterated {
        out.insert(ITERATED_DISJOIN.to_string());
    }
    out.into_iter().collect()
}

/// Replay a certificate; model resolution failures are reported as a failed
/// verdict.
pub fn verify_certificate(cert: &Certificate, base_dir: Option<&Path>) -> VerificationReport {
    match cert.model.resolve(base_dir) {
        Ok(model) => verify_with_model(cert, &model),
        Err(e) => VerificationReport {
            passed: false,
            failure: Some(format!("model: {e}")),
            base_square: None,
            base_areas: BTreeMap::new(),
            ledger: Vec::new(),
            final_class: None,
            annotations: annotations_of(cert),
        },
    }
}

pub fn verify_with_model(cert: &Certificate, model: &CurveModel) -> VerificationReport {
    let report = VerificationReport {
        passed: true,
        failure: None,
        base_square: None,
        base_areas: BTreeMap::new(),
        ledger: Vec::new(),
        final_class: None,
        annotations: annotations_of(cert),
    };
    replay(cert, model, report).unwrap_or_else(|(r, why)| r.fail(why))
}

type Replay = std::result::Result<VerificationReport, (VerificationReport, String)>;

fn replay(cert: &Certificate, model: &CurveModel, mut report: VerificationReport) -> Replay {
    let l = model.lattice();
    for (name, v) in [("base class", &cert.base_class), ("target class", &cert.target_class)] {
        if v.len() != l.rank() {
            let why = format!("{name} has {} coordinates but lattice rank is {}", v.len(), l.rank());
            return Err((report, why));
        }
    }
    match model.is_kahler(&cert.base_class) {
        Ok(true) => {}
        Ok(false) => return Err((report, "base class is not Kähler in the model".into())),
        Err(e) => return Err((report, format!("base class: {e}"))),
    }
    report.base_square = l.square(&cert.base_class).ok();

    let initial: Vec<(String, ClassVector, u32)> = match &cert.initial_objects {
        None => model
            .curves()
            .iter()
            .map(|c| (c.label.clone(), c.class.clone(), c.genus))
            .collect(),
        Some(labels) => {
            let mut out = Vec::new();
            for label in labels {
                let Some(i) = model.curve_index(label) else {
                    return Err((report, format!("initial object `{label}` is not a model curve")));
                };
                let c = &model.curves()[i];
                out.push((c.label.clone(), c.class.clone(), c.genus));
            }
            out
        }
    };
    let mut state = match ConfigurationState::new(model.lattice_arc(), cert.base_class.clone(), initial) {
        Ok(s) => s,
        Err(e) => return Err((report, format!("initial configuration: {e}"))),
    };
    report.base_areas = state.areas().unwrap_or_default();

    for (i, m) in cert.moves.iter().enumerate() {
        let index = i + 1;
        let bound = match m {
            Move::Inflate { object, .. } => inflate_bound(&state, object),
            _ => None,
        };
        state = match state.apply(m) {
            Ok(s) => s,
            Err(Error::BoundViolation { t, bound }) => {
                let why = format!(
                    "bound 2A/h violated at move {index}: t = {} but 2A/h = {}",
                    format_rational(&t),
                    format_rational(&bound)
                );
                return Err((report, why));
            }
            Err(e) => return Err((report, format!("move {index} ({}): {e}", m.describe()))),
        };
        let class = state.current_class().clone();
        let square = l.square(&class).expect("lengths checked");
        let areas = state.areas().expect("lengths checked");
        report.ledger.push(LedgerEntry {
            index,
            description: m.describe(),
            class: class.clone(),
            square,
            areas,
            bound,
        });
        if !l.is_positive_cone(&class).unwrap_or(false) {
            return Err((report, format!("class leaves the positive cone at move {index}")));
        }
    }
    let last = state.current_class().clone();
    report.final_class = Some(last.clone());
    if last != cert.target_class {
        return Err((report, format!("final class {last} differs from the target {}", cert.target_class)));
    }
    Ok(report)
}

fn inflate_bound(state: &ConfigurationState, id: &str) -> Option<Rational> {
    let o = state.object(id)?;
    let k = -state.lattice().square(&o.class).ok()?;
    let h = h_param_of(&k, o.genus).ok()?;
    Some(int(2) * state.area(id).ok()? / int(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_ruled_model, kk_gamma0_certificate, kk_gamma0_model, Parity};
    use crate::rational::ratio;

    fn kk_state() -> (CurveModel, ConfigurationState) {
        let m = kk_gamma0_model().unwrap();
        let cert = kk_gamma0_certificate(&int(1)).unwrap();
        let objs = m.curves().iter().map(|c| (c.label.clone(), c.class.clone(), c.genus));
        let s = ConfigurationState::new(m.lattice_arc(), cert.base_class, objs).unwrap();
        (m, s)
    }

    fn ids(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn h_param_table() {
        assert_eq!(h_param(1, 2).unwrap(), 1);
        assert_eq!(h_param(3, 0).unwrap(), 4);
        assert_eq!(h_param(2, 0).unwrap(), 2);
        assert_eq!(h_param(1, 0).unwrap(), 2);
        assert!(matches!(h_param(0, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn smoothing_steps_match_hand_computation() {
        let (m, s) = kk_state();
        let l = m.lattice();
        let s1 = s.smooth_and_reinstate(&ids(&["D123", "C1"]), &ids(&["D123"]), "Ctilde").unwrap();
        let ct = s1.object("Ctilde").unwrap();
        assert_eq!(ct.genus, 6);
        assert_eq!(s1.geom("Ctilde", "D123"), Some(&BigInt::zero()));
        assert!(!s1.object("C1").unwrap().alive);

        let s2 = s1
            .smooth_and_reinstate(&ids(&["C2", "Ctilde", "D123", "D249"]), &ids(&["C2", "D123", "D249"]), "S")
            .unwrap();
        let obj = s2.object("S").unwrap();
        assert_eq!(obj.genus, 14);
        assert_eq!(l.square(&obj.class).unwrap(), int(-1));
        assert_eq!(s2.area("S").unwrap(), int(8));
        assert_eq!(s2.current_class(), s.current_class());
    }

    #[test]
    fn inflate_bound_is_strict() {
        let (_, s) = kk_state();
        let s2 = s
            .smooth_and_reinstate(&ids(&["D123", "C1"]), &ids(&["D123"]), "Ctilde")
            .unwrap()
            .smooth_and_reinstate(&ids(&["C2", "Ctilde", "D123", "D249"]), &ids(&["C2", "D123", "D249"]), "S")
            .unwrap();
        assert!(s2.inflate("S", &int(8)).is_ok());
        assert_eq!(
            s2.inflate("S", &int(16)).unwrap_err(),
            Error::BoundViolation {
                t: int(16),
                bound: int(16)
            }
        );
        let after = s2.inflate("S", &int(8)).unwrap();
        assert!(matches!(after.inflate("S", &int(1)), Err(Error::Liveness(_))));
    }

    #[test]
    fn disconnected_smoothing_is_rejected() {
        let (_, s) = kk_state();
        // C1 and C2 are disjoint
        assert!(matches!(
            s.smooth_and_reinstate(&ids(&["C1", "C2"]), &[], "X"),
            Err(Error::Connectivity(_))
        ));
    }

    #[test]
    fn disjoin_inequality_is_checked() {
        let (_, s) = kk_state();
        // C1 (k = 3) meets D123 once only
        assert!(matches!(
            s.smooth_and_reinstate(&ids(&["D123", "C1"]), &ids(&["C1"]), "X"),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn ruled_sphere_endpoint() {
        // k = 3 sphere, a = 6: bound 2·6/4 = 3 = a/2
        let m = build_ruled_model(0, 3, Parity::Nontrivial).unwrap();
        let l = m.lattice_arc();
        // area of s⁻ under c·s⁺ + d·s⁻ is −3d; pick d = −2, c = 3
        let alpha = ClassVector::from_ints(&[3, -2]);
        let curve = &m.curves()[0];
        let s = ConfigurationState::new(l, alpha, [(curve.label.clone(), curve.class.clone(), 0)]).unwrap();
        let a = s.area(&curve.label).unwrap();
        assert_eq!(a, int(6));
        assert!(matches!(s.inflate(&curve.label, &(&a / int(2))), Err(Error::BoundViolation { .. })));
        assert!(s.inflate(&curve.label, &(&a / int(4))).is_ok());
    }

    #[test]
    fn inflate_nonneg_rules() {
        let m = build_ruled_model(1, 2, Parity::Trivial).unwrap();
        let l = m.lattice_arc();
        // fiber f = (s⁺ − s⁻)/k is not integral for k = 2; use s⁺ − s⁻ = 2f
        let fiber2 = ClassVector::from_ints(&[1, -1]);
        let alpha = ClassVector::from_ints(&[2, 1]);
        let curve = &m.curves()[0];
        let s = ConfigurationState::new(
            l.clone(),
            alpha.clone(),
            [("f2".to_string(), fiber2.clone(), 0), (curve.label.clone(), curve.class.clone(), 1)],
        )
        .unwrap();
        let after = s.inflate_nonneg("f2", &int(7)).unwrap();
        assert_eq!(after.current_class(), &alpha.plus_scaled(&int(7), &fiber2));
        assert!(after.object("f2").unwrap().alive);
        assert!(matches!(s.inflate_nonneg("f2", &int(0)), Err(Error::Precondition(_))));
        assert!(matches!(s.inflate_nonneg(&curve.label, &int(1)), Err(Error::WrongMove(_))));
        assert!(matches!(s.inflate("f2", &int(1)), Err(Error::WrongMove(_))));
    }

    #[test]
    fn gamma0_certificate_verifies() {
        let cert = kk_gamma0_certificate(&int(1)).unwrap();
        let m = kk_gamma0_model().unwrap();
        let r = verify_with_model(&cert, &m);
        assert!(r.passed, "{:?}", r.failure);
        assert_eq!(r.ledger.len(), 7);
        assert!(r.annotations.contains(&ITERATED_DISJOIN.to_string()));
    }

    #[test]
    fn over_bound_certificate_fails_at_move_five() {
        let mut cert = kk_gamma0_certificate(&int(1)).unwrap();
        cert.moves[4] = Move::Inflate {
            object: "Sprime".into(),
            t: int(8),
        };
        let r = verify_with_model(&cert, &kk_gamma0_model().unwrap());
        assert!(!r.passed);
        assert!(r.failure.unwrap().starts_with("bound 2A/h violated at move 5"));
    }

    #[test]
    fn empty_certificate_on_kahler_class() {
        let m = kk_gamma0_model().unwrap();
        let base = kk_gamma0_certificate(&int(1)).unwrap().base_class;
        let cert = Certificate {
            model: ModelRef::Builtin("kk-gamma0".into()),
            base_class: base.clone(),
            initial_objects: None,
            moves: Vec::new(),
            target_class: base,
            annotations: Vec::new(),
        };
        assert!(verify_with_model(&cert, &m).passed);
        assert!(verify_certificate(&cert, None).passed);
    }

    #[test]
    fn ledger_reports_bounds() {
        let cert = kk_gamma0_certificate(&ratio(1, 2)).unwrap();
        let r = verify_with_model(&cert, &kk_gamma0_model().unwrap());
        assert!(r.passed);
        assert_eq!(r.ledger[2].bound, Some(int(8)));
    }
}
