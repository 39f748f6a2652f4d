use clap::{Parser, Subcommand, ValueEnum};
use k3cm::format::{gram_to_string, parse_gram, parse_ideal, parse_type, render_endomorphism};
use k3cm::k3type::{enumerate_types, extract_type, K3Type};
use k3cm::quadfield::ImaginaryQuadraticField;
use k3cm::rayclass::{k3_class_field_degree, model_over_e, ray_class_group, RayClassGroup};
use k3cm::survey::{
    finiteness_search, growth_ratio_report, point_count_bounds, supersingular_point_count,
    verify_elkies_list, verify_fermat, verify_vinberg, FinitenessReport, GrowthReport,
    PointCountBounds, VerificationReport,
};
use k3cm::{Error, Limits};
use serde::Serialize;
use std::fmt::Write as _;
use std::io::Write;
use std::process::ExitCode;

const SCHEMA: &str = "k3cm/1";
/// Exit status of `verify-paper` when a check fails.
const EXIT_CHECK_FAILED: u8 = 1;

#[derive(Parser)]
#[command(
    name = "k3cm",
    version,
    about = "Arithmetic invariants of singular K3 surfaces with CM"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Pollard rho iterations per composite cofactor.
    #[arg(long, default_value_t = Limits::default().factor_iterations, global = true,
          value_parser = clap::value_parser!(u64).range(1..))]
    factor_cap: u64,
    /// Largest modulus norm for which residue groups are enumerated.
    #[arg(long, default_value_t = Limits::default().residue_cap as u64, global = true,
          value_parser = clap::value_parser!(u64).range(1..))]
    residue_cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for a transcendental lattice or a type.
    Analyze {
        /// Gram matrix, e.g. "8,0;0,8" or {"rank":2,"gram":[[8,0],[0,8]]}.
        #[arg(long, conflicts_with = "type_", required_unless_present = "type_")]
        gram: Option<String>,
        /// Type, e.g. "d=-7; I=1:[1,0,1]; alpha=1".
        #[arg(long = "type", id = "type_")]
        type_: Option<String>,
    },
    /// Ray class group modulo an ideal, with the conjugation action.
    Rayclass {
        #[arg(short = 'd', allow_hyphen_values = true)]
        d: i64,
        /// Modulus, e.g. "(8)" or "1:[7,3,1]".
        #[arg(short = 'I')]
        ideal: String,
    },
    /// All types over a field with Nm(D_X) up to a bound.
    Enumerate {
        #[arg(short = 'd', allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        norm_bound: u128,
    },
    /// Re-derive the worked examples; exit status 1 if any check fails.
    VerifyPaper,
    /// Fields and discriminant ideals with h·φ_E(D_X)/φ(m) <= N.
    Search {
        n: u64,
        #[arg(long, default_value_t = 200)]
        disc_bound: u64,
    },
    /// K3 class field degree against φ_E(D_X)/φ(m).
    Growth {
        #[arg(short = 'd', allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        norm_bound: u128,
    },
    /// Point counts of reductions over F_q.
    PointCount {
        #[arg(short = 'q')]
        q: i64,
        /// Picard rank of the reduction; omit for the supersingular count.
        #[arg(long, requires = "deg")]
        rho: Option<i64>,
        /// Degree [E:Q].
        #[arg(long, requires = "rho")]
        deg: Option<i64>,
    },
}

#[derive(Serialize)]
struct GroupJson {
    divisors: Vec<i64>,
    generators: Vec<String>,
    conjugation: Option<Vec<Vec<i64>>>,
}

impl GroupJson {
    fn new(g: &RayClassGroup) -> Self {
        GroupJson {
            divisors: g.structure().divisors().to_vec(),
            generators: g.generators().iter().map(|i| i.to_string()).collect(),
            conjugation: g.conjugation().map(|c| c.to_vec()),
        }
    }
}

fn conj_text(g: &RayClassGroup) -> String {
    match g.conjugation() {
        Some(c) => render_endomorphism(g.structure(), c),
        None => "undefined (modulus is not conjugation-stable)".into(),
    }
}

#[derive(Serialize)]
struct Model {
    applicable: bool,
    admits_model: Option<bool>,
    reason: String,
}

#[derive(Serialize)]
struct AnalyzeReport {
    d: i64,
    #[serde(rename = "type")]
    type_: String,
    gram: Vec<Vec<i128>>,
    discriminant_ideal: String,
    discriminant_norm: i128,
    big_discriminant: bool,
    ray_class_group: GroupJson,
    ray_class_group_text: String,
    conjugation_text: String,
    fixed_subgroup_order: u128,
    degree: u128,
    model_over_e: Model,
}

fn analyze(t: K3Type, lim: &Limits) -> Result<AnalyzeReport, Error> {
    let t = t.normalized();
    let dx = t.discriminant_ideal();
    let g = ray_class_group(t.field(), &dx, lim)?;
    let model = match model_over_e(&t, lim) {
        Ok(v) => Model {
            applicable: true,
            admits_model: Some(v.admits_model),
            reason: v.reason,
        },
        Err(Error::NotApplicable(why)) => Model {
            applicable: false,
            admits_model: None,
            reason: why,
        },
        Err(e) => return Err(e),
    };
    Ok(AnalyzeReport {
        d: t.field().discriminant(),
        type_: t.to_string(),
        gram: t.gram(),
        discriminant_ideal: dx.to_string(),
        discriminant_norm: dx.norm_int(),
        big_discriminant: t.has_big_discriminant(),
        ray_class_group: GroupJson::new(&g),
        ray_class_group_text: g.structure().to_string(),
        conjugation_text: conj_text(&g),
        fixed_subgroup_order: g
            .fixed_subgroup()
            .expect("D_X is conjugation-stable")
            .structure
            .order(),
        degree: g.k3_degree().expect("D_X is conjugation-stable"),
        model_over_e: model,
    })
}

fn analyze_text(r: &AnalyzeReport) -> String {
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    let mut s = String::new();
    let rows: Vec<(&str, String)> = vec![
        (
            "field",
            format!(
                "Q(sqrt({})), d = {}",
                if r.d % 4 == 0 { r.d / 4 } else { r.d },
                r.d
            ),
        ),
        ("type", r.type_.clone()),
        ("Gram", gram_to_string(&r.gram)),
        (
            "D_X",
            format!("{} (norm {})", r.discriminant_ideal, r.discriminant_norm),
        ),
        ("big discriminant", yes_no(r.big_discriminant).into()),
        ("Cl_{D_X}", r.ray_class_group_text.clone()),
        (
            "generators",
            if r.ray_class_group.generators.is_empty() {
                "none".into()
            } else {
                r.ray_class_group.generators.join(", ")
            },
        ),
        ("conjugation", r.conjugation_text.clone()),
        (
            "fixed subgroup",
            format!("order {}", r.fixed_subgroup_order),
        ),
        ("degree [F:E]", r.degree.to_string()),
        (
            "model over E",
            match r.model_over_e.admits_model {
                Some(b) => format!("{} ({})", yes_no(b), r.model_over_e.reason),
                None => format!("not applicable ({})", r.model_over_e.reason),
            },
        ),
    ];
    for (k, v) in rows {
        let _ = writeln!(s, "{k:<17} {v}");
    }
    s
}

#[derive(Serialize)]
struct RayclassReport {
    d: i64,
    modulus: String,
    group: GroupJson,
    structure: String,
    conjugation_text: String,
    degree: u128,
    /// Set when the degree is taken modulo I ∩ conj(I).
    degree_modulus: String,
}

fn rayclass(d: i64, ideal: &str, lim: &Limits) -> Result<RayclassReport, Error> {
    let e = ImaginaryQuadraticField::new(d)?;
    let i = parse_ideal(&e, ideal)?;
    let g = ray_class_group(&e, &i, lim)?;
    let stable = i.intersect(&i.conj(&e), &e)?;
    Ok(RayclassReport {
        d,
        modulus: i.to_string(),
        group: GroupJson::new(&g),
        structure: g.structure().to_string(),
        conjugation_text: conj_text(&g),
        degree: match g.k3_degree() {
            Some(k) => k,
            None => k3_class_field_degree(&e, &i, lim)?,
        },
        degree_modulus: stable.to_string(),
    })
}

fn rayclass_text(r: &RayclassReport) -> String {
    let mut s = format!(
        "{}; conj: {}; |Cl'| = {}\n",
        r.structure, r.conjugation_text, r.degree
    );
    let names = k3cm::format::generator_names(r.group.generators.len());
    for (n, g) in names.iter().zip(&r.group.generators) {
        let _ = writeln!(s, "{n} = {g}");
    }
    if r.degree_modulus != r.modulus {
        let _ = writeln!(s, "|Cl'| computed modulo {}", r.degree_modulus);
    }
    s
}

#[derive(Serialize)]
struct TypeRow {
    #[serde(rename = "type")]
    type_: String,
    gram: Vec<Vec<i128>>,
    discriminant_ideal: String,
    big_discriminant: bool,
}

fn enumerate(d: i64, bound: u128) -> Result<Vec<TypeRow>, Error> {
    let e = ImaginaryQuadraticField::new(d)?;
    Ok(enumerate_types(&e, bound)
        .into_iter()
        .map(|t| TypeRow {
            type_: t.to_string(),
            gram: t.gram(),
            discriminant_ideal: t.discriminant_ideal().to_string(),
            big_discriminant: t.has_big_discriminant(),
        })
        .collect())
}

fn enumerate_text(rows: &[TypeRow]) -> String {
    let mut s = String::new();
    for r in rows {
        let flag = if r.big_discriminant { "big" } else { "non-big" };
        let _ = writeln!(
            s,
            "{}  Gram {}  D_X {}  {flag}",
            r.type_,
            gram_to_string(&r.gram),
            r.discriminant_ideal
        );
    }
    if rows.is_empty() {
        s.push_str("no types\n");
    }
    s
}

fn report_text(reports: &[VerificationReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let _ = writeln!(s, "{}", r.title);
        for c in &r.checks {
            let status = match c.pass {
                Some(true) => "PASS",
                Some(false) => "FAIL",
                None => "INFO",
            };
            match &c.expected {
                Some(e) if c.pass == Some(false) => {
                    let _ = writeln!(s, "  {status} {}: {} (expected {e})", c.name, c.computed);
                }
                _ => {
                    let _ = writeln!(s, "  {status} {}: {}", c.name, c.computed);
                }
            }
        }
        for n in &r.notes {
            let _ = writeln!(s, "  note: {n}");
        }
    }
    s
}

fn search_text(r: &FinitenessReport) -> String {
    let mut s = format!("N = {}, |d| <= {}\n", r.n, r.disc_bound);
    for row in &r.rows {
        let ideals: Vec<String> = row
            .ideals
            .iter()
            .map(|i| {
                format!(
                    "{} (φ_E = {}, m = {}, φ(m) = {}, types = {})",
                    i.ideal, i.phi_e, i.m, i.phi_m, i.type_count
                )
            })
            .collect();
        let list = if ideals.is_empty() {
            "none".to_string()
        } else {
            ideals.join(", ")
        };
        let _ = writeln!(s, "d = {}, h = {}: {list}", row.d, row.h);
    }
    s
}

fn frac((p, q): (i128, i128)) -> String {
    if q == 1 {
        p.to_string()
    } else {
        format!("{p}/{q}")
    }
}

fn growth_text(r: &GrowthReport) -> String {
    let mut s = String::new();
    for row in &r.rows {
        let _ = writeln!(
            s,
            "{}  degree {}  φ_E {}  φ(m) {}  ratio {}",
            row.type_,
            row.degree,
            row.phi_e,
            row.phi_m,
            frac(row.ratio)
        );
    }
    match (r.min, r.max) {
        (Some(lo), Some(hi)) => {
            let _ = writeln!(
                s,
                "ratio range [{}, {}] over {} types",
                frac(lo),
                frac(hi),
                r.rows.len()
            );
        }
        _ => s.push_str("no types\n"),
    }
    s
}

#[derive(Serialize)]
#[serde(untagged)]
enum PointCount {
    Supersingular {
        q: i64,
        count: i128,
    },
    Bounds {
        q: i64,
        rho: i64,
        deg: i64,
        #[serde(flatten)]
        bounds: PointCountBounds,
    },
}

fn point_count_text(p: &PointCount) -> String {
    match p {
        PointCount::Supersingular { q, count } => format!("q = {q}: {count} points\n"),
        PointCount::Bounds {
            q,
            rho,
            deg,
            bounds,
        } => format!(
            "q = {q}, ρ = {rho}, [E:Q] = {deg}: {} <= #X(F_q) <= {}; valid: {}\n",
            bounds.min,
            bounds.max,
            if bounds.hensel_ok { "yes" } else { "no" }
        ),
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    command: &'a str,
    result: T,
}

struct Output {
    command: &'static str,
    json: serde_json::Value,
    text: String,
    ok: bool,
}

fn output<T: Serialize>(command: &'static str, result: &T, text: String) -> Output {
    Output {
        command,
        json: serde_json::to_value(result).expect("reports serialize"),
        text,
        ok: true,
    }
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let lim = Limits {
        factor_iterations: cli.factor_cap,
        residue_cap: cli.residue_cap as u128,
    };
    match &cli.command {
        Command::Analyze { gram, type_ } => {
            let t = match (gram, type_) {
                (Some(g), _) => extract_type(&parse_gram(g)?)?,
                (None, Some(t)) => parse_type(t)?,
                (None, None) => unreachable!("clap requires one of --gram, --type"),
            };
            let r = analyze(t, &lim)?;
            let text = analyze_text(&r);
            Ok(output("analyze", &r, text))
        }
        Command::Rayclass { d, ideal } => {
            let r = rayclass(*d, ideal, &lim)?;
            let text = rayclass_text(&r);
            Ok(output("rayclass", &r, text))
        }
        Command::Enumerate { d, norm_bound } => {
            let rows = enumerate(*d, *norm_bound)?;
            let text = enumerate_text(&rows);
            Ok(output("enumerate", &rows, text))
        }
        Command::VerifyPaper => {
            let reports = vec![verify_fermat(), verify_elkies_list(), verify_vinberg()];
            let ok = reports.iter().all(|r| r.passes());
            let text = report_text(&reports);
            let mut out = output("verify-paper", &reports, text);
            out.ok = ok;
            Ok(out)
        }
        Command::Search { n, disc_bound } => {
            let r = finiteness_search(*n, *disc_bound, &lim)?;
            let text = search_text(&r);
            Ok(output("search", &r, text))
        }
        Command::Growth { d, norm_bound } => {
            let e = ImaginaryQuadraticField::new(*d)?;
            let r = growth_ratio_report(&e, *norm_bound, &lim)?;
            let text = growth_text(&r);
            Ok(output("growth", &r, text))
        }
        Command::PointCount { q, rho, deg } => {
            let p = match (rho, deg) {
                (Some(rho), Some(deg)) => PointCount::Bounds {
                    q: *q,
                    rho: *rho,
                    deg: *deg,
                    bounds: point_count_bounds(*q, *rho, *deg)?,
                },
                _ => PointCount::Supersingular {
                    q: *q,
                    count: supersingular_point_count(*q)?,
                },
            };
            let text = point_count_text(&p);
            Ok(output("point-count", &p, text))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let rendered = match cli.format {
                Format::Text => out.text.clone(),
                Format::Json => {
                    let env = Envelope {
                        schema: SCHEMA,
                        command: out.command,
                        result: &out.json,
                    };
                    serde_json::to_string_pretty(&env).expect("json") + "\n"
                }
            };
            let _ = std::io::stdout().lock().write_all(rendered.as_bytes());
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK_FAILED)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.class().exit_code() as u8)
        }
    }
}
