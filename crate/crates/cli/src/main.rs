#![allow(clippy::result_large_err)]

mod class_expr;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use symcone::chambers::{
    chamber_point, corner_shift, partition, reflect, reflected_chamber_certificate, ChamberDescriptor, CurveModel,
    MembershipTag,
};
use symcone::document::{certificate_to_json, is_builtin_name, CertificateDocument, ModelDocument};
use symcone::lattice::is_negative_definite;
use symcone::models::{builtin_model, kk_gamma0_certificate, Parity, RuledModel};
use symcone::moves::{verify_with_model, Certificate, ModelRef};
use symcone::perturb::{order_of_contact_study, perturbed_intersections, LocalCurveModel};
use symcone::planner::{component_obstruction, dynkin_classify, plan_with, DualGraph, Obstruction, PlanOutcome, SearchLimits};
use symcone::rational::{format_rational, parse_rational};
use symcone::{ClassVector, Error, Rational};

use class_expr::{format_class, parse_class};
use report::Report;

const EXIT_FAIL: u8 = 1;
const EXIT_MALFORMED: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;

#[derive(Parser)]
#[command(name = "symcone", version, about = "Exact chamber, inflation and certificate tools for intersection lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct ModelArg {
    /// Built-in model name (kk, kk-extended, kk-gamma0, hesse, ruled, e6, ruled-G-K-PARITY) or a model JSON path
    #[arg(long, short)]
    model: String,
}

#[derive(clap::Args)]
struct ClassArg {
    /// Repeat once per coordinate (`-c 1 -c -1/2`), give a list (`-c 1,0,-1/2`) or an expression
    /// such as `w0 - 8*C1 - 21*D123`
    #[arg(long, short, allow_hyphen_values = true, required = true)]
    class: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Chamber tag, vanishing set and curve pairings of a class
    Classify {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        class: ClassArg,
    },
    /// Replay a certificate and print the per-move ledger
    Verify {
        certificate: PathBuf,
    },
    /// Search for a certificate reaching the class; prints certificate JSON
    Plan {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        class: ClassArg,
        #[arg(long, default_value_t = 12)]
        max_depth: usize,
        #[arg(long, default_value_t = 8)]
        branching: usize,
        #[arg(long, default_value_t = 50_000)]
        node_budget: usize,
    },
    /// Intersection pairing of two classes
    Pair {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        class: ClassArg,
        /// Second class, same syntax as --class
        #[arg(long, allow_hyphen_values = true, required = true)]
        with: Vec<String>,
    },
    /// Reflect a class in the wall of a curve
    Reflect {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        class: ClassArg,
        /// Curve label
        #[arg(long)]
        curve: String,
        /// Print a one-move certificate reaching the reflected class instead
        #[arg(long)]
        certificate: bool,
    },
    /// Corner point of a class for a set of curves, and optionally a chamber point
    Corner {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        class: ClassArg,
        /// Comma-separated curve labels
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
        /// Also push the corner into its chamber by this ε
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Dual graph components, ADE types and obstruction witnesses
    Dynkin {
        #[command(flatten)]
        model: ModelArg,
        /// Comma-separated curve labels; all curves when omitted
        #[arg(long, value_delimiter = ',')]
        set: Vec<String>,
    },
    /// Print a built-in model or certificate as JSON
    Example {
        #[command(subcommand)]
        which: ExampleKind,
    },
    /// Perturb a branch off k-fold tangencies and track the intersections
    Perturb {
        /// ε values, comma-separated
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        eps: Vec<f64>,
        /// `K:a,c1,c2,...` for g(z) = a z^K + c1 z^(K+1) + ...; complex values like `1+2i` are accepted
        #[arg(long = "model-spec", default_value = "2:1,1")]
        model_spec: Vec<String>,
    },
}

#[derive(Subcommand)]
enum ExampleKind {
    Kk,
    KkExtended,
    KkGamma0,
    Hesse,
    E6,
    Ruled {
        genus: u32,
        k: u32,
        parity: String,
    },
    KkGamma0Certificate {
        #[arg(long, default_value = "1")]
        t_scale: String,
    },
}

/// An error plus the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NumericalFailure(_) | Error::PropertyViolation(_) => EXIT_FAIL,
            _ => EXIT_MALFORMED,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<(String, u8), Failure>;

fn load_model(spec: &str) -> Result<(CurveModel, ModelRef), Failure> {
    if is_builtin_name(spec) && !Path::new(spec).exists() {
        return Ok((builtin_model(spec)?, ModelRef::Builtin(spec.to_string())));
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Failure {
        code: EXIT_MALFORMED,
        message: format!("cannot read model `{spec}`: {e}"),
    })?;
    let doc = ModelDocument::parse(&text)?;
    let model = doc.to_model()?;
    Ok((model, ModelRef::Inline(Box::new(doc))))
}

fn rat_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

fn class_json(v: &ClassVector) -> Value {
    Value::from(v.to_strings())
}

fn labels_of(model: &CurveModel, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| model.curves()[i].label.clone()).collect()
}

fn curve_indices(model: &CurveModel, labels: &[String]) -> Result<Vec<usize>, Failure> {
    let mut idx = labels
        .iter()
        .map(|l| {
            model.curve_index(l.trim()).ok_or_else(|| Failure {
                code: EXIT_MALFORMED,
                message: format!("unknown curve `{l}`"),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    idx.sort_unstable();
    idx.dedup();
    Ok(idx)
}

fn cmd_classify(model_spec: &str, class: &[String]) -> Outcome {
    let (model, _) = load_model(model_spec)?;
    let l = model.lattice();
    let alpha = parse_class(l, class)?;
    let p = partition(&model, &alpha)?;
    let gram = model.gram_restriction(&p.vanishing_set)?;
    let admissible = is_negative_definite(&gram)?;
    let mut r = Report::default();
    r.line(format!("model: {model_spec}"));
    r.line(format!("class: {}", format_class(l, &alpha)));
    r.line(format!("square: {}", format_rational(&l.square(&alpha)?)));
    let n = p.vanishing_set.len();
    if p.tag == MembershipTag::InteriorKahler {
        r.line(p.tag.as_str());
    } else {
        r.line(format!("{}; G = {n} curve{}", p.tag.as_str(), if n == 1 { "" } else { "s" }));
    }
    if n > 0 {
        r.line(format!("vanishing set: {}", labels_of(&model, &p.vanishing_set).join(", ")));
    }
    r.line(format!("admissible: {admissible}"));
    if !admissible {
        r.line("warning: the Gram matrix of G is not negative definite, so no chamber descriptor exists");
    }
    if !model.completeness_assumed() {
        r.line("note: the model does not assume its curve list is complete; Kähler conclusions are conditional");
    }
    r.line("pairings:");
    let width = model.curves().iter().map(|c| c.label.len()).max().unwrap_or(0);
    for (c, v) in model.curves().iter().zip(&p.pairings) {
        r.line(format!("  {:<width$}  {}", c.label, format_rational(v)));
    }
    r.set("model", model_spec);
    r.set("class", class_json(&alpha));
    r.set("square", rat_json(&l.square(&alpha)?));
    r.set("tag", p.tag.as_str());
    r.set("vanishing_set", labels_of(&model, &p.vanishing_set));
    r.set("admissible", admissible);
    r.set("completeness_assumed", model.completeness_assumed());
    r.set(
        "pairings",
        model
            .curves()
            .iter()
            .zip(&p.pairings)
            .map(|(c, v)| json!({"curve": c.label, "pairing": format_rational(v)}))
            .collect::<Vec<_>>(),
    );
    Ok((r.render(), 0))
}

fn cmd_verify(path: &Path) -> Outcome {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_MALFORMED,
        message: format!("cannot read `{}`: {e}", path.display()),
    })?;
    let cert = CertificateDocument::parse(&text)?.to_certificate()?;
    let base_dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let model = cert.model.resolve(base_dir)?;
    let l = model.lattice();
    let report = verify_with_model(&cert, &model);
    let mut r = Report::default();
    let model_name = match &cert.model {
        ModelRef::Builtin(n) | ModelRef::Path(n) => n.clone(),
        ModelRef::Inline(_) => "inline".to_string(),
    };
    r.line(format!("certificate: {}", path.display()));
    r.line(format!("model: {model_name}"));
    r.line(format!("base class: {}", format_class(l, &cert.base_class)));
    if let Some(sq) = &report.base_square {
        r.line(format!("base square: {}", format_rational(sq)));
    }
    let areas = |m: &std::collections::BTreeMap<String, Rational>| {
        m.iter()
            .map(|(k, v)| format!("{k}={}", format_rational(v)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    r.line(format!("base areas: {}", areas(&report.base_areas)));
    for e in &report.ledger {
        r.line(format!("move {}: {}", e.index, e.description));
        if let Some(b) = &e.bound {
            r.line(format!("  bound 2A/h: {}", format_rational(b)));
        }
        r.line(format!("  class: {}", format_class(l, &e.class)));
        r.line(format!("  square: {}", format_rational(&e.square)));
        r.line(format!("  areas: {}", areas(&e.areas)));
    }
    if !report.annotations.is_empty() {
        r.line(format!("annotations: {}", report.annotations.join(", ")));
    }
    match &report.failure {
        None => r.line("result: PASS"),
        Some(f) => r.line(format!("result: FAIL: {f}")),
    }
    r.set("passed", report.passed);
    r.set("failure", report.failure.clone().map_or(Value::Null, Value::from));
    r.set("model", model_name);
    r.set("base_square", report.base_square.as_ref().map_or(Value::Null, rat_json));
    r.set(
        "ledger",
        report
            .ledger
            .iter()
            .map(|e| {
                json!({
                    "index": e.index,
                    "move": e.description,
                    "class": class_json(&e.class),
                    "square": format_rational(&e.square),
                    "bound": e.bound.as_ref().map_or(Value::Null, rat_json),
                    "areas": e.areas.iter().map(|(k, v)| (k.clone(), rat_json(v))).collect::<serde_json::Map<_, _>>(),
                })
            })
            .collect::<Vec<_>>(),
    );
    r.set("final_class", report.final_class.as_ref().map_or(Value::Null, class_json));
    r.set("annotations", report.annotations.clone());
    Ok((r.render(), if report.passed { 0 } else { EXIT_FAIL }))
}

fn emit_certificate(mut cert: Certificate, model_ref: &ModelRef) -> String {
    if matches!(model_ref, ModelRef::Builtin(_)) {
        cert.model = model_ref.clone();
    }
    certificate_to_json(&cert)
}

fn cmd_plan(model_spec: &str, class: &[String], limits: SearchLimits) -> Outcome {
    let (model, model_ref) = load_model(model_spec)?;
    let target = parse_class(model.lattice(), class)?;
    match plan_with(&model, &target, limits)? {
        PlanOutcome::Certificate(c) => Ok((emit_certificate(*c, &model_ref), 0)),
        PlanOutcome::Unsupported {
            reason,
            witness,
            witness_labels,
        } => {
            let mut r = Report::default();
            r.line(format!("unsupported: {reason}"));
            if let Some(w) = &witness {
                let terms: Vec<String> = w
                    .iter()
                    .zip(&witness_labels)
                    .filter(|(c, _)| !num_traits::Zero::is_zero(*c))
                    .map(|(c, l)| format!("{c}*{l}"))
                    .collect();
                r.line(format!("witness: {}", terms.join(" + ")));
            }
            r.set("status", "unsupported");
            r.set("reason", reason);
            r.set(
                "witness",
                witness.map_or(Value::Null, |w| w.iter().map(|x| x.to_string()).collect::<Vec<_>>().into()),
            );
            r.set("witness_labels", witness_labels);
            Ok((r.render(), EXIT_UNSUPPORTED))
        }
    }
}

fn cmd_pair(model_spec: &str, a: &[String], b: &[String]) -> Outcome {
    let (model, _) = load_model(model_spec)?;
    let l = model.lattice();
    let (a, b) = (parse_class(l, a)?, parse_class(l, b)?);
    let v = l.pair(&a, &b)?;
    let mut r = Report::default();
    r.line(format!("({}) · ({}) = {}", format_class(l, &a), format_class(l, &b), format_rational(&v)));
    r.set("pairing", rat_json(&v));
    Ok((r.render(), 0))
}

fn cmd_reflect(model_spec: &str, class: &[String], curve: &str, certificate: bool) -> Outcome {
    let (model, model_ref) = load_model(model_spec)?;
    let l = model.lattice();
    let alpha = parse_class(l, class)?;
    let i = curve_indices(&model, &[curve.to_string()])?[0];
    if certificate {
        let (_, cert) = reflected_chamber_certificate(&model, &alpha, i)?;
        return Ok((emit_certificate(cert, &model_ref), 0));
    }
    let e = &model.curves()[i].class;
    let image = reflect(l, &alpha, e)?;
    let mut r = Report::default();
    r.line(format!("reflection in {curve}: {}", format_class(l, &image)));
    r.line(format!("integral: {}", image.is_integral()));
    r.line(format!("square: {}", format_rational(&l.square(&image)?)));
    r.set("class", class_json(&image));
    r.set("integral", image.is_integral());
    r.set("square", rat_json(&l.square(&image)?));
    Ok((r.render(), 0))
}

fn cmd_corner(model_spec: &str, class: &[String], set: &[String], epsilon: Option<&str>) -> Outcome {
    let (model, _) = load_model(model_spec)?;
    let l = model.lattice();
    let alpha = parse_class(l, class)?;
    let g = ChamberDescriptor::new(&model, &curve_indices(&model, set)?)?;
    let (t, corner) = corner_shift(&model, &alpha, &g)?;
    let names = labels_of(&model, &g.admissible_set);
    let mut r = Report::default();
    r.line(format!("G: {}", names.join(", ")));
    for (name, ti) in names.iter().zip(&t) {
        r.line(format!("  t[{name}] = {}", format_rational(ti)));
    }
    r.line(format!("corner: {}", format_class(l, &corner)));
    r.line(format!("square: {}", format_rational(&l.square(&corner)?)));
    r.set("set", names.clone());
    r.set("t", t.iter().map(rat_json).collect::<Vec<_>>());
    r.set("corner", class_json(&corner));
    r.set("corner_square", rat_json(&l.square(&corner)?));
    if let Some(e) = epsilon {
        let eps = parse_rational(e)?;
        let cp = chamber_point(&model, &corner, &g, &eps)?;
        r.line(format!("chamber point (ε = {}): {}", format_rational(&cp.epsilon), format_class(l, &cp.class)));
        r.set("chamber", class_json(&cp.class));
        r.set("epsilon", rat_json(&cp.epsilon));
        r.set("s", cp.s.iter().map(rat_json).collect::<Vec<_>>());
    }
    Ok((r.render(), 0))
}

fn cmd_dynkin(model_spec: &str, set: &[String]) -> Outcome {
    let (model, _) = load_model(model_spec)?;
    let idx = if set.is_empty() {
        (0..model.curves().len()).collect()
    } else {
        curve_indices(&model, set)?
    };
    let graph = DualGraph::from_model(&model, &idx)?;
    let mut r = Report::default();
    let mut comps = Vec::new();
    for local in graph.components() {
        let curves: Vec<usize> = local.iter().map(|&a| idx[a]).collect();
        let kind = dynkin_classify(&DualGraph::from_model(&model, &curves)?);
        let names = labels_of(&model, &curves);
        let (admissible, witness) = match component_obstruction(&model, &curves)? {
            Obstruction::Admissible => (true, None),
            Obstruction::Witness(w) => (false, Some(w)),
        };
        r.line(format!(
            "{}: {kind}, {}",
            names.join(" "),
            if admissible { "negative definite" } else { "not negative definite" }
        ));
        if let Some(w) = &witness {
            let terms: Vec<String> = w
                .iter()
                .zip(&names)
                .filter(|(c, _)| !num_traits::Zero::is_zero(*c))
                .map(|(c, l)| format!("{c}*{l}"))
                .collect();
            r.line(format!("  witness: {}", terms.join(" + ")));
        }
        comps.push(json!({
            "curves": names,
            "type": kind.to_string(),
            "negative_definite": admissible,
            "witness": witness.map_or(Value::Null, |w| w.iter().map(|x| x.to_string()).collect::<Vec<_>>().into()),
        }));
    }
    r.set("components", comps);
    Ok((r.render(), 0))
}

fn cmd_example(which: &ExampleKind) -> Outcome {
    let name = match which {
        ExampleKind::Kk => "kk",
        ExampleKind::KkExtended => "kk-extended",
        ExampleKind::KkGamma0 => "kk-gamma0",
        ExampleKind::Hesse => "hesse",
        ExampleKind::E6 => "e6",
        ExampleKind::Ruled { genus, k, parity } => {
            let m = RuledModel::new(*genus, *k, Parity::from_str(parity)?)?;
            return Ok((ModelDocument::from_model(m.curve_model()).to_json(), 0));
        }
        ExampleKind::KkGamma0Certificate { t_scale } => {
            let cert = kk_gamma0_certificate(&parse_rational(t_scale)?)?;
            return Ok((certificate_to_json(&cert), 0));
        }
    };
    Ok((ModelDocument::from_model(&builtin_model(name)?).to_json(), 0))
}

fn parse_model_spec(spec: &str) -> Result<LocalCurveModel, Failure> {
    let bad = |why: String| Failure {
        code: EXIT_MALFORMED,
        message: format!("model spec `{spec}`: {why}"),
    };
    let (k, coeffs) = spec.split_once(':').ok_or_else(|| bad("expected K:a,c1,...".into()))?;
    let k: u32 = k.trim().parse().map_err(|_| bad("order must be a positive integer".into()))?;
    let mut cs = coeffs
        .split(',')
        .map(|c| Complex64::from_str(c.trim()).map_err(|_| bad(format!("bad coefficient `{c}`"))));
    let a = cs.next().ok_or_else(|| bad("missing leading coefficient".into()))??;
    let tail = cs.collect::<Result<Vec<_>, _>>()?;
    Ok(LocalCurveModel::new(a, k, tail)?)
}

fn fmt_c(z: Complex64) -> String {
    format!("{:+.6e}{:+.6e}i", z.re, z.im)
}

fn cmd_perturb(eps: &[f64], specs: &[String]) -> Outcome {
    let models = specs.iter().map(|s| parse_model_spec(s)).collect::<Result<Vec<_>, _>>()?;
    let mut r = Report::default();
    r.line(format!(
        "{:<5} {:<10} {:<4} {:<30} {:<12} {}",
        "model", "eps", "root", "z*", "distance", "sign"
    ));
    let mut rows = Vec::new();
    for &e in eps {
        for h in perturbed_intersections(&models, e)? {
            r.line(format!(
                "{:<5} {:<10.3e} {:<4} {:<30} {:<12.3e} {}",
                h.model,
                e,
                h.root,
                fmt_c(h.z),
                h.distance,
                if h.sign > 0 { "+" } else { "-" }
            ));
            rows.push(json!({
                "model": h.model,
                "eps": e,
                "root": h.root,
                "z": [h.z.re, h.z.im],
                "distance": h.distance,
                "sign": h.sign,
            }));
        }
    }
    r.set("models", specs.to_vec());
    r.set("intersections", rows);
    if eps.len() >= 4 {
        let fits = order_of_contact_study(&models, eps)?;
        let mut out = Vec::new();
        for f in &fits {
            let k = models[f.model].order;
            match f.slope {
                Some(s) => r.line(format!(
                    "model {}: log-log slope {s:.4} (4/k = {:.4}), residual {:.2e}, {} points, {} excluded",
                    f.model,
                    4.0 / k as f64,
                    f.residual.unwrap_or(0.0),
                    f.points_used,
                    f.excluded
                )),
                None => r.line(format!(
                    "model {}: no slope, {} distances below rounding excluded",
                    f.model, f.excluded
                )),
            }
            out.push(json!({
                "model": f.model,
                "slope": f.slope,
                "residual": f.residual,
                "points_used": f.points_used,
                "excluded": f.excluded,
            }));
        }
        r.set("fits", out);
    }
    Ok((r.render(), 0))
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Classify { model, class } => cmd_classify(&model.model, &class.class),
        Command::Verify { certificate } => cmd_verify(certificate),
        Command::Plan {
            model,
            class,
            max_depth,
            branching,
            node_budget,
        } => cmd_plan(
            &model.model,
            &class.class,
            SearchLimits {
                max_depth: *max_depth,
                branching: *branching,
                node_budget: *node_budget,
            },
        ),
        Command::Pair { model, class, with } => cmd_pair(&model.model, &class.class, with),
        Command::Reflect {
            model,
            class,
            curve,
            certificate,
        } => cmd_reflect(&model.model, &class.class, curve, *certificate),
        Command::Corner {
            model,
            class,
            set,
            epsilon,
        } => cmd_corner(&model.model, &class.class, set, epsilon.as_deref()),
        Command::Dynkin { model, set } => cmd_dynkin(&model.model, set),
        Command::Example { which } => cmd_example(which),
        Command::Perturb { eps, model_spec } => cmd_perturb(eps, model_spec),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_MALFORMED } else { 0 });
        }
    };
    match run(cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
