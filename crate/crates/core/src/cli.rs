//! Command-line front end. [`run`] parses arguments, reads the inputs,
//! calls the engine and renders either aligned text or JSON.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::classes::{apply_series, specialize_y, SeriesKind};
use crate::csm::{
    csm_complement, csm_of_function, csm_smooth, csm_stratum, enumerative_degree, euler_degree, Arrangement, CsmClass,
};
use crate::error::{Error, Result};
use crate::groups::{hom_count, measured_value, FiniteGroup};
use crate::hirzebruch::{chi_y, equivariant_scaling_approx, eval_y, scissor_decompose, ty_of_class, MotivicClass};
use crate::io::{self, AnySpace, Input, Scene};
use crate::ring::{parse_rational, rational_pretty, rational_to_pq, Coeff, GradedElement, Rational};
use crate::spaces::{borel_approximation, BorelFiber, Space};
use crate::stacks::{
    canonical_function, degree_ca, modified_pushforward, orbifold_euler, pushforward, t_a, ConstructibleFunction,
    Level, StratifiedMap, StratifiedStackModel,
};

#[derive(Parser, Debug)]
#[command(
    name = "charclass",
    version,
    about = "Exact characteristic classes of smooth spaces, divisor complements and finite quotient stacks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    inputs: Inputs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Chern-Schwartz-MacPherson class of a space, a complement, or a function on strata
    Csm,
    /// Todd class and arithmetic genus
    Todd,
    /// L class
    #[command(name = "l-class")]
    LClass,
    /// χ_y genus, optionally evaluated with --at
    #[command(name = "chi-y")]
    ChiY,
    /// Hirzebruch class of a space or of a divisor complement
    Hirzebruch,
    /// Coefficients of a named series: chern, todd, l or tdy
    Series { name: String },
    /// |Hom(A, G)| and related counts
    #[command(name = "hom-count")]
    HomCount,
    /// Σ χ_c(stratum) |Hom(A, G_j)| / |G_j| for a stack model
    #[command(name = "orbifold-euler")]
    OrbifoldEuler,
    /// Degree of C^A_*(α) on a linked model, or an enumerative degree on a space
    Degree,
    /// Modified pushforward of a function along a stratified map
    Pushforward,
    /// Finite Borel approximations for a rank-one torus
    Borel,
}

#[derive(Args, Debug)]
struct Inputs {
    /// Space preset (P2, P1xP1, cubic, ...), inline JSON or @file
    #[arg(long, global = true)]
    space: Option<String>,
    /// Divisor classes: `h,h` or JSON [{"class":"h"}, ...]
    #[arg(long, global = true)]
    divisors: Option<String>,
    /// Function values: JSON keyed by strata
    #[arg(long, global = true)]
    function: Option<String>,
    /// Group preset (S3, Q8, D4, A4, Z/n) or JSON
    #[arg(long, global = true)]
    group: Option<String>,
    /// Abelian group A such as 0, Z, Z^2, Z/2
    #[arg(long = "A", global = true)]
    a: Option<String>,
    /// Stack model preset (point, pt/S3, P1/Z2) or JSON
    #[arg(long, global = true)]
    model: Option<String>,
    /// Stratified map JSON, or `<model>->pt`
    #[arg(long, global = true)]
    map: Option<String>,
    /// Total Chern class of a bundle, e.g. `1 + h`
    #[arg(long, global = true)]
    bundle: Option<String>,
    /// Series order
    #[arg(long, global = true, default_value_t = crate::classes::DEFAULT_ORDER)]
    order: usize,
    /// Values of y, comma separated
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    at: Vec<String>,
    /// Level of the given function values
    #[arg(long, global = true, value_enum, default_value_t = LevelArg::Invariant)]
    level: LevelArg,
    /// Highest approximation level for `borel`
    #[arg(long, global = true, default_value_t = 5)]
    upto: usize,
    /// JSON file holding any of the inputs above
    #[arg(long, global = true)]
    scene: Option<String>,
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LevelArg {
    Invariant,
    Underline,
}

impl From<LevelArg> for Level {
    fn from(l: LevelArg) -> Self {
        match l {
            LevelArg::Invariant => Level::Invariant,
            LevelArg::Underline => Level::Underline,
        }
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Exit code for malformed input.
pub const EXIT_SCHEMA: i32 = 2;
/// Exit code for a failed computation.
pub const EXIT_COMPUTE: i32 = 3;

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code: EXIT_SCHEMA,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let json_out = cli.inputs.json;
    match execute(cli) {
        Ok(report) => Outcome {
            code: 0,
            stdout: if json_out {
                let mut s = serde_json::to_string_pretty(&report.json).expect("JSON values serialize");
                s.push('\n');
                s
            } else {
                report.text
            },
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: if matches!(e, Error::Parse(_)) {
                EXIT_SCHEMA
            } else {
                EXIT_COMPUTE
            },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

struct Report {
    text: String,
    json: Value,
}

/// Flag values merged with a scene file; flags win.
struct Resolved {
    inputs: Inputs,
    scene: Scene,
}

impl Resolved {
    fn pick(flag: &Option<String>, scene: &Option<Value>) -> Option<Input> {
        match (flag, scene) {
            (Some(f), _) => Some(Input::Text(f.clone())),
            (None, Some(v)) => Some(Input::Json(v.clone())),
            _ => None,
        }
    }

    fn need(what: &str, x: Option<Input>) -> Result<Input> {
        x.ok_or_else(|| Error::Parse(format!("missing --{what}")))
    }

    fn space(&self) -> Result<Space> {
        io::read_space(&Self::need("space", Self::pick(&self.inputs.space, &self.scene.space))?)
    }

    fn any_space(&self) -> Result<AnySpace> {
        io::read_any_space(&Self::need("space", Self::pick(&self.inputs.space, &self.scene.space))?)
    }

    fn arrangement(&self, x: &Space) -> Result<Option<Arrangement>> {
        Self::pick(&self.inputs.divisors, &self.scene.divisors)
            .map(|d| io::read_arrangement(x, &d, self.scene.normal_crossings.unwrap_or(true)))
            .transpose()
    }

    fn function(&self) -> Option<Input> {
        Self::pick(&self.inputs.function, &self.scene.function)
    }

    fn group(&self) -> Result<Option<FiniteGroup>> {
        Self::pick(&self.inputs.group, &self.scene.group)
            .map(|g| io::read_group(&g))
            .transpose()
    }

    fn abelian(&self, default: &str) -> Result<crate::groups::AbelianGroupSpec> {
        let a = Self::pick(&self.inputs.a, &self.scene.a).unwrap_or_else(|| Input::from(default));
        io::read_abelian(&a)
    }

    fn model(&self) -> Result<Option<StratifiedStackModel>> {
        let g = self.group()?;
        Self::pick(&self.inputs.model, &self.scene.model)
            .map(|m| io::read_model(&m, g.as_ref()))
            .transpose()
    }

    fn map(&self) -> Result<Option<StratifiedMap>> {
        let g = self.group()?;
        Self::pick(&self.inputs.map, &self.scene.map)
            .map(|m| io::read_map(&m, g.as_ref()))
            .transpose()
    }

    fn bundle(&self) -> Option<String> {
        self.inputs.bundle.clone().or_else(|| self.scene.bundle.clone())
    }

    fn stack_function(&self, model: &Arc<StratifiedStackModel>) -> Result<ConstructibleFunction> {
        match self.function() {
            Some(f) => io::read_stack_function(&f, model, self.inputs.level.into()),
            None => Ok(crate::stacks::one(model)),
        }
    }

    fn y_values(&self) -> Result<Vec<Rational>> {
        if self.inputs.at.is_empty() {
            return Ok([-1, 0, 1].iter().map(|&v| Rational::from_integer(v.into())).collect());
        }
        self.inputs
            .at
            .iter()
            .map(|s| parse_rational(s).map_err(|e| Error::Parse(format!("--at: {e}"))))
            .collect()
    }
}

fn execute(cli: Cli) -> Result<Report> {
    let scene = match &cli.inputs.scene {
        Some(path) => io::read_scene(path)?,
        None => Scene::default(),
    };
    let r = Resolved {
        inputs: cli.inputs,
        scene,
    };
    match cli.command {
        Command::Csm => cmd_csm(&r),
        Command::Todd => cmd_series_class(&r, SeriesKind::Todd, "todd"),
        Command::LClass => cmd_series_class(&r, SeriesKind::L, "l-class"),
        Command::ChiY => cmd_chi_y(&r),
        Command::Hirzebruch => cmd_hirzebruch(&r),
        Command::Series { name } => cmd_series(&r, &name),
        Command::HomCount => cmd_hom_count(&r),
        Command::OrbifoldEuler => cmd_orbifold_euler(&r),
        Command::Degree => cmd_degree(&r),
        Command::Pushforward => cmd_pushforward(&r),
        Command::Borel => cmd_borel(&r),
    }
}

// ---- rendering ----

fn pq(r: &Rational) -> String {
    rational_to_pq(r)
}

fn pretty_coeff(c: &Coeff, params: &[String]) -> String {
    c.to_pretty_string(params)
}

/// Monomial/coefficient table, one term per line.
fn class_table(e: &GradedElement) -> String {
    let rows: Vec<(String, String)> = e
        .to_json_terms()
        .into_iter()
        .zip(e.terms().values())
        .map(|(t, c)| (t.monomial, pretty_coeff(c, e.ring().params())))
        .collect();
    if rows.is_empty() {
        return "  (zero)\n".into();
    }
    let width = rows.iter().map(|(m, _)| m.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (m, c) in rows {
        let _ = writeln!(out, "  {m:<width$}  {c}");
    }
    out
}

fn class_json(e: &GradedElement) -> Value {
    serde_json::to_value(e.to_json_terms()).expect("terms serialize")
}

fn level_name(l: Level) -> &'static str {
    match l {
        Level::Invariant => "invariant",
        Level::Underline => "underline",
    }
}

fn values_line(model: &StratifiedStackModel, values: &[Rational]) -> String {
    model
        .strata()
        .iter()
        .zip(values)
        .map(|(s, v)| format!("{}={}", s.label, rational_pretty(v)))
        .collect::<Vec<_>>()
        .join("  ")
}

fn values_json(model: &StratifiedStackModel, values: &[Rational]) -> Value {
    Value::Object(
        model
            .strata()
            .iter()
            .zip(values)
            .map(|(s, v)| (s.label.clone(), Value::String(pq(v))))
            .collect(),
    )
}

fn function_json(f: &ConstructibleFunction) -> Value {
    json!({
        "invariant": values_json(f.model(), &f.invariant_values()),
        "underline": values_json(f.model(), &f.underline_values()),
    })
}

fn function_text(name: &str, f: &ConstructibleFunction) -> String {
    format!(
        "{name} (invariant): {}\n{name} (underline): {}\n",
        values_line(f.model(), &f.invariant_values()),
        values_line(f.model(), &f.underline_values())
    )
}

// ---- commands ----

fn cmd_csm(r: &Resolved) -> Result<Report> {
    let x = r.space()?;
    let arr = r.arrangement(&x)?;
    let (class, what) = match (&arr, r.function()) {
        (None, None) => (csm_smooth(&x), "space".to_string()),
        (None, Some(_)) => return Err(Error::Parse("--function needs --divisors".into())),
        (Some(a), None) => (csm_complement(a)?, "complement".to_string()),
        (Some(a), Some(f)) => (
            csm_of_function(a, &io::read_arrangement_function(&f)?)?,
            "function".to_string(),
        ),
    };
    let degree = euler_degree(&class);
    let mut text = format!(
        "space: {}\nclass of {what}:\n{}degree: {}\n",
        x.label(),
        class_table(&class.value),
        rational_pretty(&degree)
    );
    let mut out = json!({
        "command": "csm",
        "space": x.label(),
        "of": what,
        "class": class_json(&class.value),
        "degree": pq(&degree),
    });
    if let Some(a) = &arr {
        let mut strata = serde_json::Map::new();
        text.push_str("strata:\n");
        let width = a.strata().map(|i| i.to_string().len()).max().unwrap_or(0);
        for i in a.strata() {
            let d = euler_degree(&csm_stratum(a, i)?);
            let key = i.to_string();
            let _ = writeln!(text, "  {key:<width$}  {}", rational_pretty(&d));
            strata.insert(key, Value::String(pq(&d)));
        }
        out["strata"] = Value::Object(strata);
    }
    if let Some(b) = r.bundle() {
        let e = io::read_bundle(&x, &b, None)?;
        let d = enumerative_degree(&x, &e, &class)?;
        let _ = writeln!(
            text,
            "enumerative degree with c(E) = {}: {}",
            e.total_chern(),
            rational_pretty(&d)
        );
        out["enumerative_degree"] = Value::String(pq(&d));
    }
    Ok(Report { text, json: out })
}

fn cmd_series_class(r: &Resolved, kind: SeriesKind, command: &str) -> Result<Report> {
    let x = r.space()?;
    let value = apply_series(&kind.series(r.inputs.order), x.tangent())?;
    let degree = x.integrate_rational(&value)?;
    let text = format!(
        "space: {}\n{} class:\n{}degree: {}\n",
        x.label(),
        kind.name(),
        class_table(&value),
        rational_pretty(&degree)
    );
    let json = json!({
        "command": command,
        "space": x.label(),
        "class": class_json(&value),
        "degree": pq(&degree),
    });
    Ok(Report { text, json })
}

fn y_names() -> Vec<String> {
    vec![crate::classes::Y.to_string()]
}

fn cmd_chi_y(r: &Resolved) -> Result<Report> {
    let x = r.space()?;
    let p = chi_y(&x)?;
    let ys = r.y_values()?;
    let mut text = format!("chi_y({}) = {}\n", x.label(), pretty_coeff(&p, &y_names()));
    let mut values = serde_json::Map::new();
    for y in &ys {
        let v = eval_y(&p, y);
        let _ = writeln!(text, "  y = {}: {}", rational_pretty(y), rational_pretty(&v));
        values.insert(rational_pretty(y), Value::String(pq(&v)));
    }
    let json = json!({
        "command": "chi-y",
        "space": x.label(),
        "chi_y": p.to_pq_string(&y_names()),
        "values": values,
    });
    Ok(Report { text, json })
}

fn cmd_hirzebruch(r: &Resolved) -> Result<Report> {
    let x = r.space()?;
    let m = match r.arrangement(&x)? {
        Some(a) => scissor_decompose(&a)?,
        None => MotivicClass::identity(&x),
    };
    let t = ty_of_class(&m)?;
    let deg = t.degree()?;
    let mut text = format!(
        "space: {}\nmotivic class: {m}\nT_y class:\n{}chi_y = {}\nspecializations:\n",
        x.label(),
        class_table(&t.value),
        pretty_coeff(&deg, &y_names())
    );
    let mut specs = serde_json::Map::new();
    for y in r.y_values()? {
        let s = t.specialize(&y)?;
        let d = eval_y(&deg, &y);
        let _ = writeln!(
            text,
            "  y = {}: {}   degree {}",
            rational_pretty(&y),
            s,
            rational_pretty(&d)
        );
        specs.insert(
            rational_pretty(&y),
            json!({ "class": class_json(&s), "degree": pq(&d) }),
        );
    }
    let json = json!({
        "command": "hirzebruch",
        "space": x.label(),
        "motivic_class": m.to_string(),
        "class": class_json(&t.value),
        "chi_y": deg.to_pq_string(&y_names()),
        "specializations": specs,
    });
    Ok(Report { text, json })
}

fn cmd_series(r: &Resolved, name: &str) -> Result<Report> {
    let kind: SeriesKind = name.parse().map_err(|e| Error::Parse(format!("series: {e}")))?;
    let s = kind.series(r.inputs.order);
    let mut text = format!("{} series to order {}:\n", kind.name(), s.order());
    let mut coeffs = Vec::new();
    for (k, c) in s.coefficients().iter().enumerate() {
        let _ = writeln!(text, "  a^{k:<2}  {}", c.to_pretty_string(s.params()));
        coeffs.push(Value::String(c.to_pq_string(s.params())));
    }
    let mut json = json!({
        "command": "series",
        "series": kind.name(),
        "order": s.order(),
        "coefficients": coeffs,
    });
    if !s.params().is_empty() && !r.inputs.at.is_empty() {
        let mut special = serde_json::Map::new();
        for y in r.y_values()? {
            let t = specialize_y(&s, &y);
            let _ = writeln!(text, "y = {}: {}", rational_pretty(&y), t.to_pretty_string());
            let cs = t
                .coefficients()
                .iter()
                .map(|c| Value::String(c.to_pq_string(&[])))
                .collect();
            special.insert(rational_pretty(&y), Value::Array(cs));
        }
        json["specializations"] = Value::Object(special);
    }
    Ok(Report { text, json })
}

fn cmd_hom_count(r: &Resolved) -> Result<Report> {
    let g = r.group()?.ok_or_else(|| Error::Parse("missing --group".into()))?;
    let a = r.abelian("Z^2")?;
    let count = hom_count(&a, &g);
    let measured = measured_value(&a, &g);
    let classes = g.conjugacy_class_count();
    let text = format!(
        "|G| = {}\nconjugacy classes: {classes}\n|Hom({a}, G)| = {count}\n|Hom({a}, G)| / |G| = {}\n",
        g.order(),
        rational_pretty(&measured)
    );
    let json = json!({
        "command": "hom-count",
        "A": a.to_string(),
        "order": g.order(),
        "conjugacy_classes": classes,
        "hom_count": count.to_string(),
        "measured_value": pq(&measured),
    });
    Ok(Report { text, json })
}

fn need_model(r: &Resolved) -> Result<Arc<StratifiedStackModel>> {
    Ok(Arc::new(
        r.model()?.ok_or_else(|| Error::Parse("missing --model".into()))?,
    ))
}

fn cmd_orbifold_euler(r: &Resolved) -> Result<Report> {
    let m = need_model(r)?;
    let a = r.abelian("Z^2")?;
    let e = orbifold_euler(&m, &a);
    let canon = canonical_function(&a, &m);
    let text = format!(
        "model: {} ({} strata)\n{}orbifold Euler number for A = {a}: {}\n",
        m.label(),
        m.len(),
        function_text("1^A", &canon),
        rational_pretty(&e)
    );
    let json = json!({
        "command": "orbifold-euler",
        "model": m.label(),
        "A": a.to_string(),
        "canonical_function": function_json(&canon),
        "orbifold_euler": pq(&e),
    });
    Ok(Report { text, json })
}

fn cmd_degree(r: &Resolved) -> Result<Report> {
    if let Some(m) = r.model()? {
        let m = Arc::new(m);
        let a = r.abelian("0")?;
        let alpha = r.stack_function(&m)?;
        let rep = degree_ca(&alpha, &a)?;
        let text = format!(
            "model: {}\nA = {a}\n{}degree of C^A_* (class): {}\ndegree of C^A_* (direct): {}\nagree: {}\nunderline degree: {}\n",
            m.label(),
            function_text("T^A(alpha)", &t_a(&alpha, &a)),
            rational_pretty(&rep.class_degree),
            rational_pretty(&rep.direct_integral),
            rep.agrees(),
            rational_pretty(&rep.underline)
        );
        let json = json!({
            "command": "degree",
            "model": m.label(),
            "A": a.to_string(),
            "weighted_function": function_json(&t_a(&alpha, &a)),
            "class_degree": pq(&rep.class_degree),
            "direct_integral": pq(&rep.direct_integral),
            "agree": rep.agrees(),
            "underline": pq(&rep.underline),
        });
        return Ok(Report { text, json });
    }
    let x = r.space()?;
    let class: CsmClass = match (r.arrangement(&x)?, r.function()) {
        (None, _) => csm_smooth(&x),
        (Some(a), None) => csm_complement(&a)?,
        (Some(a), Some(f)) => csm_of_function(&a, &io::read_arrangement_function(&f)?)?,
    };
    let euler = euler_degree(&class);
    let mut text = format!("space: {}\nEuler degree: {}\n", x.label(), rational_pretty(&euler));
    let mut json = json!({ "command": "degree", "space": x.label(), "euler_degree": pq(&euler) });
    if let Some(b) = r.bundle() {
        let e = io::read_bundle(&x, &b, None)?;
        let d = enumerative_degree(&x, &e, &class)?;
        let _ = writeln!(
            text,
            "enumerative degree with c(E) = {}: {}",
            e.total_chern(),
            rational_pretty(&d)
        );
        json["enumerative_degree"] = Value::String(pq(&d));
    }
    Ok(Report { text, json })
}

fn cmd_pushforward(r: &Resolved) -> Result<Report> {
    let f = match r.map()? {
        Some(f) => f,
        None => StratifiedMap::to_point(&need_model(r)?),
    };
    let a = r.abelian("0")?;
    let alpha = r.stack_function(f.source())?;
    let plain = pushforward(&f, &alpha)?;
    let modified = modified_pushforward(&f, &alpha, &a)?;
    let text = format!(
        "source: {}  target: {}\nA = {a}\n{}{}{}",
        f.source().label(),
        f.target().label(),
        function_text("alpha", &alpha),
        function_text("f_*", &plain),
        function_text("f^A_*", &modified)
    );
    let json = json!({
        "command": "pushforward",
        "source": f.source().label(),
        "target": f.target().label(),
        "A": a.to_string(),
        "input_level": level_name(alpha.level()),
        "alpha": function_json(&alpha),
        "pushforward": function_json(&plain),
        "modified_pushforward": function_json(&modified),
    });
    Ok(Report { text, json })
}

fn cmd_borel(r: &Resolved) -> Result<Report> {
    let fiber = match r.any_space()? {
        AnySpace::Equivariant(e) => BorelFiber::from(&e),
        AnySpace::Plain(x) if x.dim() == 0 => BorelFiber::Point,
        AnySpace::Plain(x) => {
            return Err(Error::Unsupported(format!(
                "`borel` needs a point or an equivariant projective space, got {}",
                x.label()
            )))
        }
    };
    if r.inputs.upto == 0 {
        return Err(Error::Parse("--upto must be at least 1".into()));
    }
    let mut text = String::new();
    let mut levels = Vec::new();
    let mut previous = None;
    for level in 1..=r.inputs.upto {
        let b = borel_approximation(1, &fiber, level)?;
        let stable = previous.as_ref().map(|p| b.stable_agreement(p));
        let _ = writeln!(
            text,
            "level {level}: {}{}",
            b.value,
            match stable {
                Some(true) => "   (agrees with previous level)",
                Some(false) => "   (differs from previous level)",
                None => "",
            }
        );
        levels.push(json!({
            "level": level,
            "class": class_json(&b.value),
            "fundamental": b.is_fundamental_class(),
            "stable": stable,
        }));
        previous = Some(b);
    }
    let mut scaling = serde_json::Map::new();
    if fiber == BorelFiber::Point {
        text.push_str("scaled point classes:\n");
        for kind in SeriesKind::ALL {
            let s = kind.series(r.inputs.order.max(r.inputs.upto));
            let vals = (1..=r.inputs.upto)
                .map(|l| equivariant_scaling_approx(&s, l).map(|e| e.to_string()))
                .collect::<Result<Vec<_>>>()?;
            let _ = writeln!(text, "  {:<5} {}", kind.name(), vals.join("  "));
            scaling.insert(kind.name().into(), json!(vals));
        }
    }
    let json = json!({ "command": "borel", "levels": levels, "scaling": scaling });
    Ok(Report { text, json })
}
