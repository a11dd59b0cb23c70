//! `expmat`: scriptable JSON front end for the exponential-matrix toolkit.
//!
//! Every command reads a JSON payload (stdin by default), works over the
//! field named by `--field p[,m]`, and writes a single-line JSON report to
//! stdout. Exit codes: 0 = success/true; 1 = a verification came back
//! false or a definitive negative (the report carries the certificate);
//! 2 = malformed or inapplicable input; 3 = a search or enumeration budget
//! was exceeded. All output is byte-deterministic for identical inputs.
//!
//! The commands are thin adapters over the library; no mathematical logic
//! lives here.

mod schema;

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use expmat::{
    build_from_tuple, check_equiv, enumerate_nil_tuples, factor, from_pair, l_of, lift, orbits,
    pi_map, search_equiv, to_hopf, to_pair, transport_equiv, verify_exponential, EquivError,
    ExpError, ExpMat, Field, GaAction, Level, ModRepError, NilTuple, PGLClass, Rep, Witness,
};
use schema::{
    certificate_to_json, elem_from_json, elem_to_json, field_to_json, matconst_from_json,
    matconst_to_json, matpoly_from_json, matpoly_to_json, niltuple_parts_from_json,
    niltuple_to_json, parse_field_spec, point_from_json, point_to_json, to_table,
};

#[derive(Parser)]
#[command(
    name = "expmat",
    version,
    about = "Exact toolkit for exponential matrices over k[T]"
)]
struct Cli {
    /// Coefficient field: `p` for F_p, `p,m` for GF(p^m), `0` for Q
    #[arg(long, global = true, value_name = "P[,M]")]
    field: Option<String>,

    /// JSON payload: a file path, or `-` for stdin
    #[arg(long, global = true, default_value = "-", value_name = "FILE|-")]
    input: String,

    /// Candidate budget for witness search
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget: u64,

    /// Point-field size for the projective commands (defaults to the
    /// order of the coefficient field)
    #[arg(long, global = true, value_name = "SIZE")]
    q: Option<u64>,

    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Check the exponential-matrix conditions; payload {"matrix": M}
    Verify,
    /// Layered product of a nilpotent tuple; payload {"tuple": T}
    Build,
    /// Factor an exponential matrix into its layers; payload {"matrix": M}
    Factor,
    /// Hopf axiom checks on a value matrix; payload {"matrix": M}
    HopfCheck,
    /// Canonical PGL class of an exponential matrix; payload {"matrix": M}
    Project,
    /// Unique exponential lift of a class; payload {"matrix": M}
    Lift,
    /// Apply the induced action to a point; payload {"matrix": M, "t": t, "point": x}
    Act,
    /// Orbit partition of P^{n-1}(F_q); payload {"matrix": M}
    Orbits,
    /// Check or search a conjugation witness; payload {"a1": M, "a2": M[, "witness": P][, "level": "a".."f"]}
    Equiv,
    /// Evaluate a representation; payload {"tuple": T, "exponents": [a1, ..]}
    RepEval,
    /// Exponential matrix of a representation; payload {"tuple": T}
    Pi,
    /// Split a representation into (matrix, padding); payload {"tuple": T}
    Pair,
    /// Rebuild a representation; payload {"matrix": M, "padding": i}
    Unpair,
    /// Count nilpotent tuples over F_q
    Enumerate {
        /// Matrix size
        #[arg(long)]
        n: usize,
        /// Tuple length
        #[arg(long)]
        r: usize,
        /// Prime shortcut for `--field p`
        #[arg(long)]
        p: Option<u64>,
    },
}

enum Failure {
    /// exit 2
    Malformed(String),
    /// exit 1, report included
    MathFalse(Value),
    /// exit 3, report included
    Budget(Value),
}

type CmdResult = Result<Value, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match dispatch(&cli) {
        Ok(report) => {
            emit(&report, format);
            ExitCode::SUCCESS
        }
        Err(Failure::MathFalse(report)) => {
            emit(&report, format);
            ExitCode::from(1)
        }
        Err(Failure::Malformed(message)) => {
            emit(&json!({ "error": message }), format);
            ExitCode::from(2)
        }
        Err(Failure::Budget(report)) => {
            emit(&report, format);
            ExitCode::from(3)
        }
    }
}

fn emit(report: &Value, format: Format) {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string(report).expect("reports serialize")
        ),
        Format::Table => print!(
            "{}",
            to_table(report.as_object().expect("reports are objects"))
        ),
    }
}

fn dispatch(cli: &Cli) -> CmdResult {
    if let Command::Enumerate { n, r, p } = &cli.command {
        return cmd_enumerate(cli, *n, *r, *p);
    }
    let field = cli
        .field
        .as_deref()
        .ok_or_else(|| Failure::Malformed("--field is required".to_string()))
        .and_then(|spec| parse_field_spec(spec).map_err(Failure::Malformed))?;
    let payload = read_payload(cli)?;
    match cli.command {
        Command::Verify => cmd_verify(&field, &payload),
        Command::Build => cmd_build(&field, &payload),
        Command::Factor => cmd_factor(&field, &payload),
        Command::HopfCheck => cmd_hopf_check(&field, &payload),
        Command::Project => cmd_project(&field, &payload),
        Command::Lift => cmd_lift(&field, &payload),
        Command::Act => cmd_act(&field, &payload),
        Command::Orbits => cmd_orbits(cli, &field, &payload),
        Command::Equiv => cmd_equiv(cli, &field, &payload),
        Command::RepEval => cmd_rep_eval(&field, &payload),
        Command::Pi => cmd_pi(&field, &payload),
        Command::Pair => cmd_pair(&field, &payload),
        Command::Unpair => cmd_unpair(&field, &payload),
        Command::Enumerate { .. } => unreachable!("handled above"),
    }
}

fn read_payload(cli: &Cli) -> Result<Value, Failure> {
    let raw = if cli.input == "-" {
        let mut buffer = String::new();
        std::io::stdin()
            .read_to_string(&mut buffer)
            .map_err(|e| Failure::Malformed(format!("cannot read stdin: {e}")))?;
        buffer
    } else {
        fs::read_to_string(&cli.input)
            .map_err(|e| Failure::Malformed(format!("cannot read {}: {e}", cli.input)))?
    };
    serde_json::from_str(&raw).map_err(|e| Failure::Malformed(format!("invalid JSON: {e}")))
}

fn key<'a>(payload: &'a Value, name: &str) -> Result<&'a Value, Failure> {
    payload
        .get(name)
        .ok_or_else(|| Failure::Malformed(format!("payload needs `{name}`")))
}

fn base_report(command: &str, field: &Field) -> Map<String, Value> {
    let mut report = Map::new();
    report.insert("command".to_string(), json!(command));
    report.insert("field".to_string(), field_to_json(field));
    report
}

/// Parse and verify an exponential matrix, reporting the certificate on
/// failure.
fn parse_expmat(
    payload_key: &str,
    payload: &Value,
    field: &Field,
    report: &mut Map<String, Value>,
) -> Result<ExpMat, Failure> {
    let mat = matpoly_from_json(key(payload, payload_key)?, field).map_err(Failure::Malformed)?;
    report.insert(payload_key.to_string(), matpoly_to_json(&mat, field));
    ExpMat::new(mat, field.clone()).map_err(|e| match e {
        ExpError::NotExponential(cert) => {
            report.insert("exponential".to_string(), json!(false));
            report.insert("certificate".to_string(), certificate_to_json(&cert, field));
            Failure::MathFalse(Value::Object(report.clone()))
        }
        other => Failure::Malformed(other.to_string()),
    })
}

fn parse_tuple(
    payload: &Value,
    field: &Field,
    report: &mut Map<String, Value>,
) -> Result<NilTuple, Failure> {
    let (n, mats) =
        niltuple_parts_from_json(key(payload, "tuple")?, field).map_err(Failure::Malformed)?;
    match NilTuple::new(n, mats, field.clone()) {
        Ok(tuple) => {
            report.insert("tuple".to_string(), niltuple_to_json(&tuple, field));
            Ok(tuple)
        }
        Err(e) => {
            report.insert("valid".to_string(), json!(false));
            report.insert("error".to_string(), json!(e.to_string()));
            Err(Failure::MathFalse(Value::Object(report.clone())))
        }
    }
}

fn parse_rep(
    payload: &Value,
    field: &Field,
    report: &mut Map<String, Value>,
) -> Result<Rep, Failure> {
    let tuple = parse_tuple(payload, field, report)?;
    Rep::new(tuple).map_err(|e| Failure::Malformed(e.to_string()))
}

fn cmd_verify(field: &Field, payload: &Value) -> CmdResult {
    let mut report = base_report("verify", field);
    let mat = matpoly_from_json(key(payload, "matrix")?, field).map_err(Failure::Malformed)?;
    report.insert("matrix".to_string(), matpoly_to_json(&mat, field));
    match verify_exponential(&mat, field) {
        Ok(()) => {
            report.insert("exponential".to_string(), json!(true));
            Ok(Value::Object(report))
        }
        Err(cert) => {
            report.insert("exponential".to_string(), json!(false));
            report.insert("certificate".to_string(), certificate_to_json(&cert, field));
            Err(Failure::MathFalse(Value::Object(report)))
        }
    }
}

fn cmd_build(field: &Field, payload: &Value) -> CmdResult {
    let mut report = base_report("build", field);
    let tuple = parse_tuple(payload, field, &mut report)?;
    let a = build_from_tuple(&tuple);
    report.insert("matrix".to_string(), matpoly_to_json(a.matrix(), field));
    Ok(Value::Object(report))
}

fn cmd_factor(field: &Field, payload: &Value) -> CmdResult {
    let mut report = base_report("factor", field);
    let a = parse_expmat("matrix", payload, field, &mut report)?;
    match factor(&a) {
        Ok(tuple) => {
            report.insert("tuple".to_string(), niltuple_to_json(&tuple, field));
            Ok(Value::Object(report))
        }
        Err(e) => {
            report.insert("error".to_string(), json!(e.to_string()));
            Err(Failure::MathFalse(Value::Object(report)))
        }
    }
}

fn cmd_hopf_check(field: &Field, payload: &Value) -> CmdResult {
    let mut report = base_report("hopf-check", field);
    let mat = matpoly_from_json(key(payload, "matrix")?, field).map_err(Failure::Malformed)?;
    report.insert("matrix".to_string(), matpoly_to_json(&mat, field));
    match to_hopf(mat, field.clone()) {
        Err(e) => {
            report.insert("hopf".to_string(), json!(false));
            report.insert("reason".to_string(), json!(e.to_string()));
            Err(Failure::MathFalse(Value::Object(report)))
        }
        Ok(hom) => {
            let comultiplication = hom.check_comultiplication();
            let counit = hom.check_counit();
            let antipode = hom.check_antipode();
            let hopf = hom.is_hopf_hom();
            report.insert("comultiplication".to_string(), json!(comultiplication));
            report.insert("counit".to_string(), json!(counit));
            report.insert("antipode".to_string(), json!(antipode));
            report.insert("hopf".to_string(), json!(hopf));
            if hopf {
                Ok(Value::Object(report))
            } else {
                Err(Failure::MathFalse(Value::Object(report)))
            }
        }
    }
}

fn cmd_project(field: &Field, payload: &Value) -> CmdResult {
    let mut report = base_report("project", field);
    let a = parse_expmat("matrix", payload, field, &mut report)?;
    let theta = expmat::project(&a);
    report.insert("class".to_string(), matpoly_to_json(theta.rep(), field));
    Ok(Value::Object(report))
}

fn cmd_lift(field: &Field, payload: &Value) -> CmdResult {
    let mut report = base_report("lift", field);
    let mat = matpoly_from_json(key(payload, "matrix")?, field).map_err(Failure::Malformed)?;
    report.insert("matrix".to_string(), matpoly_to_json(&mat, field));
    let theta = PGLClass::new(mat, field.clone()).map_err(|e| {
        report.insert("error".to_string(), json!(e.to_string()));
        Failure::MathFalse(Value::Object(report.clone()))
    })?;
    report.insert("class".to_string(), matpoly_to_json(theta.rep(), field));
    match lift(&theta) {
        Ok(a) => {
            report.insert("lift".to_string(), matpoly_to_json(a.matrix(), field));
            Ok(Value::Object(report))
        }
        Err(expmat::ProjError::NotExponential(cert)) => {
            report.insert("certificate".to_string(), certificate_to_json(&cert, field));
            report.insert(
                "error".to_string(),
                json!("class is not a projective homomorphism"),
            );
            Err(Failure::MathFalse(Value::Object(report)))
        }
        Err(e) => {
            report.insert("error".to_string(), json!(e.to_string()));
            Err(Failure::MathFalse(Value::Object(report)))
        }
    }
}

fn cmd_act(field: &Field, payload: &Value) -> CmdResult {
    let mut report = base_report("act", field);
    let a = parse_expmat("matrix", payload, field, &mut report)?;
    let t = elem_from_json(key(payload, "t")?, field).map_err(Failure::Malformed)?;
    let x = point_from_json(key(payload, "point")?, field).map_err(Failure::Malformed)?;
    if x.dim_ambient() != a.n() {
        return Err(Failure::Malformed(format!(
            "point has {} coordinates, expected {}",
            x.dim_ambient(),
            a.n()
        )));
    }
    report.insert("t".to_string(), elem_to_json(&t, field));
    report.insert("point".to_string(), point_to_json(&x, field));
    let image = GaAction::new(a).act(&t, &x);
    report.insert("image".to_string(), point_to_json(&image, field));
    Ok(Value::Object(report))
}

fn cmd_orbits(cli: &Cli, field: &Field, payload: &Value) -> CmdResult {
    let mut report = base_report("orbits", field);
    let a = parse_expmat("matrix", payload, field, &mut report)?;
    let q = cli
        .q
        .or_else(|| field.order())
        .ok_or_else(|| Failure::Malformed("--q is required over the rationals".to_string()))?;
    let mu = GaAction::new(a);
    let partition = orbits(&mu, q).map_err(|e| Failure::Malformed(e.to_string()))?;
    let fixed = expmat::fixed_points(&mu, q).map_err(|e| Failure::Malformed(e.to_string()))?;

    // points live in the field with q elements; render them there
    let point_field = match field.order() {
        Some(order) if order == q => field.clone(),
        _ => {
            let p = field.characteristic();
            let m = (0..).find(|m| p.pow(*m) >= q).expect("q is a p-power here");
            Field::extension(p, m as usize).expect("admissible point field")
        }
    };
    report.insert("q".to_string(), json!(q));
    report.insert("point_field".to_string(), field_to_json(&point_field));
    report.insert(
        "points".to_string(),
        json!(partition.iter().map(Vec::len).sum::<usize>()),
    );
    report.insert(
        "orbits".to_string(),
        Value::Array(
            partition
                .iter()
                .map(|orbit| {
                    Value::Array(
                        orbit
                            .iter()
                            .map(|x| point_to_json(x, &point_field))
                            .collect(),
                    )
                })
                .collect(),
        ),
    );
    report.insert(
        "fixed".to_string(),
        Value::Array(
            fixed
                .iter()
                .map(|x| point_to_json(x, &point_field))
                .collect(),
        ),
    );
    Ok(Value::Object(report))
}

fn cmd_equiv(cli: &Cli, field: &Field, payload: &Value) -> CmdResult {
    let mut report = base_report("equiv", field);
    let a1 = parse_expmat("a1", payload, field, &mut report)?;
    let a2 = parse_expmat("a2", payload, field, &mut report)?;
    if a1.n() != a2.n() {
        return Err(Failure::Malformed(
            "a1 and a2 must have the same size".to_string(),
        ));
    }

    if let Some(witness_json) = payload.get("witness") {
        let mat = matconst_from_json(witness_json, field).map_err(Failure::Malformed)?;
        if mat.n() != a1.n() {
            return Err(Failure::Malformed("witness size mismatch".to_string()));
        }
        report.insert("witness".to_string(), matconst_to_json(&mat, field));
        let witness = Witness::new(mat, field).map_err(|e| {
            report.insert("error".to_string(), json!(e.to_string()));
            Failure::MathFalse(Value::Object(report.clone()))
        })?;
        let equivalent = match payload.get("level") {
            None => check_equiv(&a1, &a2, &witness),
            Some(level_json) => {
                let level: Level = level_json
                    .as_str()
                    .ok_or_else(|| Failure::Malformed("`level` must be a string".to_string()))?
                    .parse()
                    .map_err(Failure::Malformed)?;
                report.insert("level".to_string(), level_json.clone());
                transport_equiv(level, &a1, &a2, &witness)
            }
        };
        report.insert("equivalent".to_string(), json!(equivalent));
        if equivalent {
            Ok(Value::Object(report))
        } else {
            Err(Failure::MathFalse(Value::Object(report)))
        }
    } else {
        report.insert("budget".to_string(), json!(cli.budget));
        match search_equiv(&a1, &a2, cli.budget) {
            Ok(Some(witness)) => {
                report.insert("equivalent".to_string(), json!(true));
                report.insert("definitive".to_string(), json!(true));
                report.insert(
                    "witness".to_string(),
                    matconst_to_json(witness.matrix(), field),
                );
                Ok(Value::Object(report))
            }
            Ok(None) => {
                report.insert("equivalent".to_string(), json!(false));
                report.insert("definitive".to_string(), json!(true));
                Err(Failure::MathFalse(Value::Object(report)))
            }
            Err(EquivError::BudgetExceeded { .. }) => {
                report.insert("definitive".to_string(), json!(false));
                report.insert("error".to_string(), json!("search budget exceeded"));
                Err(Failure::Budget(Value::Object(report)))
            }
            Err(e) => Err(Failure::Malformed(e.to_string())),
        }
    }
}

fn cmd_rep_eval(field: &Field, payload: &Value) -> CmdResult {
    let mut report = base_report("rep-eval", field);
    let rep = parse_rep(payload, field, &mut report)?;
    let exponents: Vec<u64> = key(payload, "exponents")?
        .as_array()
        .ok_or_else(|| Failure::Malformed("`exponents` must be an array".to_string()))?
        .iter()
        .map(|v| {
            v.as_u64().ok_or_else(|| {
                Failure::Malformed("exponents must be non-negative integers".to_string())
            })
        })
        .collect::<Result<_, _>>()?;
    report.insert("exponents".to_string(), json!(exponents));
    match expmat::rho_eval(&rep, &exponents) {
        Ok(value) => {
            report.insert("matrix".to_string(), matconst_to_json(&value, field));
            Ok(Value::Object(report))
        }
        Err(ModRepError::LengthMismatch { expected, got }) => Err(Failure::Malformed(format!(
            "exponent vector has length {got}, expected {expected}"
        ))),
        Err(e) => Err(Failure::Malformed(e.to_string())),
    }
}

fn cmd_pi(field: &Field, payload: &Value) -> CmdResult {
    let mut report = base_report("pi", field);
    let rep = parse_rep(payload, field, &mut report)?;
    report.insert(
        "matrix".to_string(),
        matpoly_to_json(pi_map(&rep).matrix(), field),
    );
    Ok(Value::Object(report))
}

fn cmd_pair(field: &Field, payload: &Value) -> CmdResult {
    let mut report = base_report("pair", field);
    let rep = parse_rep(payload, field, &mut report)?;
    let (a, padding) = to_pair(&rep);
    report.insert("matrix".to_string(), matpoly_to_json(a.matrix(), field));
    report.insert("padding".to_string(), json!(padding));
    Ok(Value::Object(report))
}

fn cmd_unpair(field: &Field, payload: &Value) -> CmdResult {
    let mut report = base_report("unpair", field);
    let a = parse_expmat("matrix", payload, field, &mut report)?;
    let padding = key(payload, "padding")?.as_u64().ok_or_else(|| {
        Failure::Malformed("`padding` must be a non-negative integer".to_string())
    })?;
    report.insert("padding".to_string(), json!(padding));
    match from_pair(&a, padding as usize) {
        Ok(rep) => {
            report.insert("tuple".to_string(), niltuple_to_json(rep.tuple(), field));
            Ok(Value::Object(report))
        }
        Err(ModRepError::CharZero) => Err(Failure::Malformed(
            "unpair requires positive characteristic".to_string(),
        )),
        Err(e) => {
            report.insert("error".to_string(), json!(e.to_string()));
            Err(Failure::MathFalse(Value::Object(report)))
        }
    }
}

fn cmd_enumerate(cli: &Cli, n: usize, r: usize, p: Option<u64>) -> CmdResult {
    let field = match (p, cli.field.as_deref()) {
        (Some(p), _) => Field::prime(p).map_err(|e| Failure::Malformed(e.to_string()))?,
        (None, Some(spec)) => parse_field_spec(spec).map_err(Failure::Malformed)?,
        (None, None) => {
            return Err(Failure::Malformed(
                "enumerate needs --p or --field".to_string(),
            ))
        }
    };
    if !field.is_finite() {
        return Err(Failure::Malformed(
            "enumeration requires a finite field".to_string(),
        ));
    }
    let mut report = base_report("enumerate", &field);
    report.insert("n".to_string(), json!(n));
    report.insert("r".to_string(), json!(r));
    match enumerate_nil_tuples(n, r, &field) {
        Ok(tuples) => {
            let minimal = tuples
                .iter()
                .filter(|t| {
                    let rep = Rep::new((*t).clone()).expect("finite characteristic");
                    l_of(&rep) == rep.r()
                })
                .count();
            report.insert("tuples".to_string(), json!(tuples.len()));
            report.insert("minimal".to_string(), json!(minimal));
            Ok(Value::Object(report))
        }
        Err(ModRepError::EnumerationTooLarge { count }) => {
            report.insert(
                "error".to_string(),
                json!(format!(
                    "enumeration space of {count} candidates is too large"
                )),
            );
            Err(Failure::Budget(Value::Object(report)))
        }
        Err(e) => Err(Failure::Malformed(e.to_string())),
    }
}
