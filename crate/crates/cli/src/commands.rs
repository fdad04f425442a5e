use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use periodpoly::analytic::{
    completed_lvalues, eisenstein_period_demo, period_and_omega, petersson_product, haberland_full, DemoCase, NewformData,
    Parity,
};
use periodpoly::cosets::{cusp_classes, Character, CosetSpace, GroupKind};
use periodpoly::exactalg::{parse_rational, ComplexBall, Scalar};
use periodpoly::gamma02::{extra_relations_check, reduced_petersson};
use periodpoly::hecke::{
    common_eigen_polynomial, hecke_matrix, manin_coefficient, rational_trace, solve_universal_hecke,
    solve_universal_hecke_ordered, verify_hecke_property, GroupRingElement, Normalization, SigmaSpec, SolveOrder,
};
use periodpoly::polyspace::{build_coboundary_and_d, build_w, build_w_extended, chi_component, eps_split, PolyVector, Subspace};
use periodpoly::Error;

use crate::checks;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MALFORMED: i32 = 3;
pub const EXIT_INFEASIBLE: i32 = 4;
pub const EXIT_VERIFY: i32 = 5;
pub const EXIT_COMPUTE: i32 = 6;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: msg.into() }
    }
    fn verify(msg: impl Into<String>) -> Self {
        Failure { code: EXIT_VERIFY, message: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::Io(_) => EXIT_MALFORMED,
            Error::Infeasible { .. } | Error::EmptyIntersection | Error::NotOneDimensional(_) => EXIT_INFEASIBLE,
            Error::Invalid(_) => EXIT_USAGE,
            _ => EXIT_COMPUTE,
        };
        Failure { code, message: e.to_string() }
    }
}

type Out = Result<String, Failure>;

#[derive(Parser, Debug)]
#[command(name = "periodpoly", version, about = "Period polynomials, Haberland pairings and universal Hecke elements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GroupArgs {
    /// gamma0 or gamma1
    #[arg(long, default_value = "gamma0")]
    pub group: String,
    #[arg(long)]
    pub level: i64,
    #[arg(long)]
    pub weight: i64,
    /// Index into the characters mod N (0 is trivial); Γ₁ only.
    #[arg(long)]
    pub character: Option<usize>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum SpaceName {
    W,
    WPlus,
    WMinus,
    C,
    WExt,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum SigmaName {
    Delta,
    DeltaVee,
    Theta,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum Order {
    Small,
    Large,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimensions of W, W±, C, D, W̃ and the inferred dim S.
    Dims(GroupArgs),
    /// Cusp classes with widths and regularity.
    Cusps(GroupArgs),
    /// Solve for a universal Hecke element and verify it.
    HeckeElement {
        #[arg(long)]
        n: i64,
        /// Entry bound (defaults to n).
        #[arg(long)]
        bound: Option<i64>,
        /// Orbit traversal order of the solver; the default tries the Heilbronn candidate first.
        #[arg(long, value_enum)]
        order: Option<Order>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Exact matrix of a Hecke-type operator on a space, with its trace.
    HeckeMatrix {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        n: i64,
        #[arg(long, value_enum, default_value = "w")]
        space: SpaceName,
        #[arg(long, value_enum, default_value = "delta")]
        sigma: SigmaName,
        /// Group ring element file; solved when absent.
        #[arg(long)]
        element: Option<PathBuf>,
    },
    /// Common eigen-polynomial in W± for given eigenvalues "p:λ".
    Eigenpoly {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum)]
        sign: Sign,
        #[arg(long = "eigen", value_name = "P:LAMBDA")]
        eigen: Vec<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Completed L-values Λ(s, f) for 0 < s < k.
    Lvalue {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        s: Vec<i64>,
        #[arg(long, default_value_t = checks::Q_TERMS)]
        terms: usize,
    },
    /// ω±, and (f, f) from the eigen-polynomials of f.
    Petersson {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        level: Option<i64>,
        #[arg(long)]
        weight: Option<i64>,
        #[arg(long = "eigen", value_name = "P:LAMBDA")]
        eigen: Vec<String>,
        #[arg(long, default_value_t = checks::Q_TERMS)]
        terms: usize,
    },
    /// Hecke eigenvalue λ_n from the plus eigen-polynomial.
    Eigenvalue {
        #[arg(long)]
        level: i64,
        #[arg(long)]
        weight: i64,
        #[arg(long)]
        n: i64,
        #[arg(long = "eigen", value_name = "P:LAMBDA")]
        eigen: Vec<String>,
        /// Plus eigen-polynomial file; replaces --eigen.
        #[arg(long)]
        poly: Option<PathBuf>,
    },
    /// Run the acceptance criteria and module invariants.
    Verify {
        /// Comma-separated check ids.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
    /// Extra relations for a cusp form on Γ₀(2).
    Gamma02Relations {
        #[arg(long)]
        form: PathBuf,
        #[arg(long, default_value_t = checks::Q_TERMS)]
        terms: usize,
        #[arg(long)]
        json: bool,
    },
    /// Eisenstein period demos: gamma06 or fulllevel:K.
    Gamma06Demo {
        #[arg(long, default_value = "gamma06")]
        case: String,
    },
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure { code: EXIT_MALFORMED, message: format!("{}: {e}", path.display()) })
}

fn emit(text: String, output: &Option<PathBuf>) -> Out {
    match output {
        Some(p) => {
            fs::write(p, &text).map_err(|e| Failure { code: EXIT_COMPUTE, message: format!("{}: {e}", p.display()) })?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn ball(z: &ComplexBall) -> Value {
    // + 0.0 turns −0.0 into 0.0
    json!({"re": z.re + 0.0, "im": z.im + 0.0, "err": z.err})
}

fn build_space(g: &GroupArgs) -> Result<Arc<CosetSpace>, Failure> {
    let kind: GroupKind = g.group.parse().map_err(|e: Error| Failure::usage(e.to_string()))?;
    if g.character.is_some() && kind != GroupKind::Gamma1 {
        return Err(Failure::usage("--character needs --group gamma1"));
    }
    if g.level > 200 {
        eprintln!("building the coset space of {kind}({}) ...", g.level);
    }
    Ok(Arc::new(CosetSpace::build(kind, g.level, g.weight)?))
}

fn character(g: &GroupArgs) -> Result<Option<Character>, Failure> {
    let Some(i) = g.character else { return Ok(None) };
    let all = Character::all(g.level);
    all.get(i).cloned().map(Some).ok_or_else(|| Failure::usage(format!("character index {i} out of range (0..{})", all.len())))
}

fn restrict(sub: Subspace, chi: &Option<Character>) -> Result<Subspace, Failure> {
    match chi {
        Some(c) => Ok(chi_component(&sub, c)?),
        None => Ok(sub),
    }
}

fn parse_eigen(items: &[String]) -> Result<Vec<(i64, Scalar)>, Failure> {
    items
        .iter()
        .map(|s| {
            let (p, lam) = s.split_once(':').ok_or_else(|| Failure::usage(format!("eigenvalue {s:?} is not of the form p:λ")))?;
            let p: i64 = p.trim().parse().map_err(|_| Failure::usage(format!("bad prime in {s:?}")))?;
            let lam = parse_rational(lam.trim()).map_err(|_| Failure::usage(format!("bad eigenvalue in {s:?}")))?;
            Ok((p, Scalar::from(lam)))
        })
        .collect()
}

fn load_form(path: &Path) -> Result<NewformData, Failure> {
    Ok(NewformData::from_json_str(&read(path)?)?)
}

pub fn execute(cli: Cli) -> Out {
    match cli.command {
        Command::Dims(g) => dims(&g),
        Command::Cusps(g) => cusps(&g),
        Command::HeckeElement { n, bound, order, output } => hecke_element(n, bound, order, &output),
        Command::HeckeMatrix { group, n, space, sigma, element } => hecke_matrix_cmd(&group, n, space, sigma, &element),
        Command::Eigenpoly { group, sign, eigen, output } => eigenpoly(&group, sign, &eigen, &output),
        Command::Lvalue { form, s, terms } => lvalue(&form, &s, terms),
        Command::Petersson { form, level, weight, eigen, terms } => petersson(&form, level, weight, &eigen, terms),
        Command::Eigenvalue { level, weight, n, eigen, poly } => eigenvalue(level, weight, n, &eigen, &poly),
        Command::Verify { only } => verify(&only),
        Command::Gamma02Relations { form, terms, json } => gamma02_relations(&form, terms, json),
        Command::Gamma06Demo { case } => demo(&case),
    }
}

fn dims(g: &GroupArgs) -> Out {
    let sp = build_space(g)?;
    let chi = character(g)?;
    eprintln!("building W ...");
    let w = restrict(build_w(&sp)?, &chi)?;
    let (plus, minus) = eps_split(&w)?;
    eprintln!("building C, D ...");
    let (c, d) = build_coboundary_and_d(&sp)?;
    let (c, d) = (restrict(c, &chi)?, restrict(d, &chi)?);
    eprintln!("building W̃ ...");
    let wt = restrict(build_w_extended(&sp)?, &chi)?;
    let v = json!({
        "group": sp.kind().to_string(),
        "level": sp.level(),
        "weight": sp.weight(),
        "character": g.character,
        "index": sp.index(),
        "dim_w": w.dim(),
        "dim_w_plus": plus.dim(),
        "dim_w_minus": minus.dim(),
        "dim_c": c.dim(),
        "dim_d": d.dim(),
        "dim_w_ext": wt.dim(),
        "dim_s": (w.dim() - c.dim()) / 2,
    });
    Ok(pretty(&v))
}

fn cusps(g: &GroupArgs) -> Out {
    let sp = build_space(g)?;
    let set = cusp_classes(&sp);
    let classes: Vec<Value> = set
        .classes
        .iter()
        .map(|c| {
            json!({
                "representative": sp.label_name(c.representative),
                "width": c.width,
                "regular": c.regular,
                "labels": c.labels.iter().map(|&l| sp.label_name(l)).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(pretty(&json!({
        "group": sp.kind().to_string(),
        "level": sp.level(),
        "count": set.count(),
        "regular": set.regular_count(),
        "cusps": classes,
    })))
}

fn hecke_element(n: i64, bound: Option<i64>, order: Option<Order>, output: &Option<PathBuf>) -> Out {
    let bound = bound.unwrap_or(n);
    let t = match order {
        None => solve_universal_hecke(n, bound)?,
        Some(Order::Small) => solve_universal_hecke_ordered(n, bound, SolveOrder::SmallFirst)?,
        Some(Order::Large) => solve_universal_hecke_ordered(n, bound, SolveOrder::LargeFirst)?,
    };
    let check = verify_hecke_property(&t, n)?;
    if !check.holds() {
        return Err(Failure::verify(format!("T̃_{n} fails the defining identity: {}", check.to_json())));
    }
    let v = json!({"n": n, "bound": bound, "element": t.to_json(), "check": check.to_json()});
    emit(pretty(&v), output)
}

fn load_element(path: &Option<PathBuf>, n: i64) -> Result<GroupRingElement, Failure> {
    match path {
        None => Ok(solve_universal_hecke(n, n)?),
        Some(p) => {
            let v: Value = serde_json::from_str(&read(p)?).map_err(|e| Failure { code: EXIT_MALFORMED, message: e.to_string() })?;
            let el = v.get("element").unwrap_or(&v);
            let t = GroupRingElement::from_json(el, Some(n))?;
            if !verify_hecke_property(&t, n)?.holds() {
                return Err(Failure::verify(format!("the element in {} is not a universal Hecke element", p.display())));
            }
            Ok(t)
        }
    }
}

fn hecke_matrix_cmd(g: &GroupArgs, n: i64, space: SpaceName, sigma: SigmaName, element: &Option<PathBuf>) -> Out {
    let sp = build_space(g)?;
    let chi = character(g)?;
    let sub = match space {
        SpaceName::W => build_w(&sp)?,
        SpaceName::WPlus => eps_split(&build_w(&sp)?)?.0,
        SpaceName::WMinus => eps_split(&build_w(&sp)?)?.1,
        SpaceName::C => build_coboundary_and_d(&sp)?.0,
        SpaceName::WExt => build_w_extended(&sp)?,
    };
    let sub = restrict(sub, &chi)?;
    let spec = match sigma {
        SigmaName::Delta => SigmaSpec::delta(&sp, n)?,
        SigmaName::DeltaVee => SigmaSpec::delta_vee(&sp, n)?,
        SigmaName::Theta => SigmaSpec::theta(&sp, n)?,
    };
    let t = load_element(element, n)?;
    let m = hecke_matrix(&sub, &t, &spec)?;
    let rows: Vec<Vec<String>> = (0..m.nrows()).map(|r| m.row(r).iter().map(|x| x.to_string()).collect()).collect();
    let trace = match rational_trace(&m) {
        Some(r) => Scalar::from(r).to_string(),
        None => m.trace().to_string(),
    };
    Ok(pretty(&json!({"n": n, "dim": sub.dim(), "matrix": rows, "trace": trace})))
}

fn eigenpoly(g: &GroupArgs, sign: Sign, eigen: &[String], output: &Option<PathBuf>) -> Out {
    let data = parse_eigen(eigen)?;
    let sp = build_space(g)?;
    let chi = character(g)?;
    let (plus, minus) = eps_split(&restrict(build_w(&sp)?, &chi)?)?;
    let p = match sign {
        Sign::Plus => common_eigen_polynomial(&plus, &data, Normalization::Plus)?,
        Sign::Minus => common_eigen_polynomial(&minus, &data, Normalization::Minus)?,
    };
    emit(pretty(&p.to_json()), output)
}

fn lvalue(form: &Path, s: &[i64], terms: usize) -> Out {
    let f = load_form(form)?;
    let values = completed_lvalues(&f, terms)?;
    let picked: Vec<Value> = values
        .iter()
        .filter(|l| s.is_empty() || s.contains(&l.s))
        .map(|l| json!({"s": l.s, "value": ball(&l.value), "terms": l.terms}))
        .collect();
    if picked.len() < s.len() {
        return Err(Failure::usage(format!("s must lie strictly between 0 and k = {}", f.weight)));
    }
    Ok(pretty(&json!({"level": f.level, "weight": f.weight, "lambda": picked})))
}

fn plus_minus(level: i64, weight: i64, eigen: &[String]) -> Result<(PolyVector, PolyVector), Failure> {
    let data = parse_eigen(eigen)?;
    let sp = Arc::new(CosetSpace::build(GroupKind::Gamma0, level, weight)?);
    let (plus, minus) = eps_split(&build_w(&sp)?)?;
    Ok((
        common_eigen_polynomial(&plus, &data, Normalization::Plus)?,
        common_eigen_polynomial(&minus, &data, Normalization::Minus)?,
    ))
}

fn petersson(form: &Path, level: Option<i64>, weight: Option<i64>, eigen: &[String], terms: usize) -> Out {
    let f = load_form(form)?;
    if level.is_some_and(|l| l != f.level) || weight.is_some_and(|k| k != f.weight) {
        return Err(Failure::usage(format!("the form file is for level {}, weight {}", f.level, f.weight)));
    }
    let (pp, pm) = plus_minus(f.level, f.weight, eigen)?;
    let per = period_and_omega(&f, &pp, &pm, terms)?;
    let a = petersson_product(&per, &per, (Parity::Plus, Parity::Minus))?;
    let b = petersson_product(&per, &per, (Parity::Minus, Parity::Plus))?;
    let full = haberland_full(&per, &per)?;
    let mut v = json!({
        "level": f.level,
        "weight": f.weight,
        "omega_plus": ball(&per.omega_plus),
        "omega_minus": ball(&per.omega_minus),
        "petersson": ball(&a),
        "petersson_other_kappa": ball(&b),
        "petersson_full_haberland": ball(&full),
    });
    if f.level == 2 {
        let r = reduced_petersson(&f, terms)?;
        v["petersson_reduced"] = ball(&r.norm);
    }
    Ok(pretty(&v))
}

fn eigenvalue(level: i64, weight: i64, n: i64, eigen: &[String], poly: &Option<PathBuf>) -> Out {
    let sp = Arc::new(CosetSpace::build(GroupKind::Gamma0, level, weight)?);
    let p = match poly {
        Some(path) => {
            let v: Value = serde_json::from_str(&read(path)?).map_err(|e| Failure { code: EXIT_MALFORMED, message: e.to_string() })?;
            PolyVector::from_json(&sp, &v)?
        }
        None => {
            let (plus, _) = eps_split(&build_w(&sp)?)?;
            common_eigen_polynomial(&plus, &parse_eigen(eigen)?, Normalization::Plus)?
        }
    };
    let t = solve_universal_hecke(n, n)?;
    let lam = manin_coefficient(&p, &t, &SigmaSpec::delta(&sp, n)?)?;
    Ok(format!("{lam}\n"))
}

fn verify(only: &[String]) -> Out {
    let all: Vec<checks::Check> = checks::criteria().into_iter().chain(checks::invariants()).collect();
    let chosen: Vec<&checks::Check> = all.iter().filter(|c| only.is_empty() || only.iter().any(|o| o == c.id)).collect();
    if chosen.is_empty() {
        return Err(Failure::usage(format!("no check matches {only:?}")));
    }
    let mut text = String::new();
    let mut failed = 0;
    for c in chosen {
        eprintln!("running check {} ...", c.id);
        let (ok, line) = checks::run(c);
        failed += usize::from(!ok);
        text += &line;
        text.push('\n');
    }
    if failed > 0 {
        print!("{text}");
        return Err(Failure::verify(format!("{failed} check(s) failed")));
    }
    Ok(text)
}

fn gamma02_relations(form: &Path, terms: usize, as_json: bool) -> Out {
    let f = load_form(form)?;
    let rep = extra_relations_check(&f, terms)?;
    if as_json {
        Ok(pretty(&rep.to_json()))
    } else {
        Ok(rep.to_table())
    }
}

fn demo(case: &str) -> Out {
    let case: DemoCase = case.parse().map_err(|e: Error| Failure::usage(e.to_string()))?;
    Ok(pretty(&eisenstein_period_demo(case)?.to_json()))
}
