use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use clusterpoly::exchange::{positive_roots, RootVector, SkewSymmetrizer};
use clusterpoly::formulas::{f_polynomial_closed, g_vector_closed, quantum_f_polynomial_closed, ClassicalMatrix};
use clusterpoly::input::{parse_input, ParsedInput};
use clusterpoly::oracle::{enumerate_finite_type, ClusterTable, DEFAULT_CAP};
use clusterpoly::poly::{LaurentPoly, QuantumTorus, QuantumTorusElement};
use clusterpoly::verify::{run_suites, Suite, VerifyReport};

#[derive(Parser)]
#[command(name = "clusterpoly", version, about = "F-polynomials, g-vectors and quantum F-polynomials in classical types")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// F-polynomial of a denominator vector
    Classical(RootRequest),
    /// Quantum F-polynomial of a denominator vector
    Quantum {
        #[command(flatten)]
        root: RootRequest,
        #[arg(long, default_value_t = 1)]
        d_scale: i64,
    },
    /// g-vector of a denominator vector
    Gvector(RootRequest),
    /// Every non-initial cluster variable, by exhaustive mutation
    Enumerate {
        #[arg(long)]
        input: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run differential suites
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 4)]
        max_rank: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Args)]
struct RootRequest {
    /// Matrix JSON file, or `-` for stdin
    #[arg(long)]
    input: String,
    /// Denominator vector, comma separated
    #[arg(long)]
    denom: String,
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    method: Method,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Closed,
    Oracle,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Latex,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<clusterpoly::Error> for Failure {
    fn from(e: clusterpoly::Error) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

fn input_error(message: String) -> Failure {
    Failure { code: 1, message }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok((out, code)) => {
            println!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_source(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| input_error(format!("reading stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| input_error(format!("reading {path}: {e}")))
    }
}

/// Parsed matrix plus the root in both labelings.
struct Resolved {
    parsed: ParsedInput,
    d: RootVector,
    canonical_d: RootVector,
}

impl Resolved {
    fn canonical(&self) -> Result<ClassicalMatrix, Failure> {
        let c = &self.parsed.classification;
        Ok(ClassicalMatrix::new(c.canonical.clone(), c.cartan)?)
    }

    fn header(&self, method: Option<Method>) -> Header {
        let c = &self.parsed.classification;
        Header {
            cartan: c.cartan.to_string(),
            rank: c.cartan.rank,
            method,
            d: self.d.clone(),
        }
    }

    fn poly_to_original(&self, f: &LaurentPoly) -> LaurentPoly {
        let c = &self.parsed.classification;
        f.map_exponents(f.vars(), |e| c.to_original(&RootVector::new(e.to_vec())).into_coords())
    }

    fn oracle_table(&self) -> Result<ClusterTable, Failure> {
        Ok(enumerate_finite_type(&self.parsed.matrix, DEFAULT_CAP)?)
    }
}

fn resolve(req: &RootRequest) -> Result<Resolved, Failure> {
    let parsed = parse_input(&read_source(&req.input)?)?;
    let d = RootVector::parse_list(&req.denom)
        .ok_or_else(|| input_error(format!("--denom {:?} is not a comma-separated list of integers", req.denom)))?;
    let c = &parsed.classification;
    if d.dim() != c.cartan.rank {
        return Err(input_error(format!(
            "--denom has {} entries but the matrix has rank {}",
            d.dim(),
            c.cartan.rank
        )));
    }
    let canonical_d = c.to_canonical(&d);
    let roots = positive_roots(c.cartan);
    if roots.binary_search(&canonical_d).is_err() {
        let mut listed: Vec<RootVector> = roots.iter().map(|r| c.to_original(r)).collect();
        listed.sort();
        let listed: Vec<String> = listed.iter().map(|r| r.to_string()).collect();
        return Err(input_error(format!(
            "{d} is not a positive root of this {} matrix; positive roots: {}",
            c.cartan,
            listed.join(" ")
        )));
    }
    Ok(Resolved {
        parsed,
        d,
        canonical_d,
    })
}

#[derive(Serialize)]
struct Header {
    #[serde(rename = "type")]
    cartan: String,
    rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    method: Option<Method>,
    d: RootVector,
}

#[derive(Serialize)]
struct ClassicalDoc {
    #[serde(flatten)]
    header: Header,
    #[serde(rename = "F")]
    f: LaurentPoly,
}

#[derive(Serialize)]
struct GVectorDoc {
    #[serde(flatten)]
    header: Header,
    g: RootVector,
}

#[derive(Serialize)]
struct QuantumDoc {
    #[serde(flatten)]
    header: Header,
    d_scale: i64,
    #[serde(rename = "F")]
    f: QuantumTorusElement,
}

#[derive(Serialize)]
struct EnumerateDoc<'a> {
    #[serde(rename = "type")]
    cartan: String,
    rank: usize,
    seeds_visited: usize,
    table: &'a ClusterTable,
}

fn json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string(doc).expect("output documents serialize")
}

fn run(command: Command) -> Result<(String, u8), Failure> {
    match command {
        Command::Classical(req) => classical(&req).map(|s| (s, 0)),
        Command::Gvector(req) => gvector(&req).map(|s| (s, 0)),
        Command::Quantum { root, d_scale } => quantum(&root, d_scale).map(|s| (s, 0)),
        Command::Enumerate { input, format } => enumerate(&input, format).map(|s| (s, 0)),
        Command::Verify {
            suite,
            max_rank,
            format,
        } => verify(&suite, max_rank, format),
    }
}

fn classical(req: &RootRequest) -> Result<String, Failure> {
    let r = resolve(req)?;
    let f = match req.method {
        Method::Closed => r.poly_to_original(&f_polynomial_closed(&r.canonical()?, &r.canonical_d)?),
        Method::Oracle => r.oracle_table()?.get(&r.d).expect("every positive root is reached").f.clone(),
    };
    Ok(match req.format {
        Format::Json => json(&ClassicalDoc {
            header: r.header(Some(req.method)),
            f,
        }),
        Format::Text => f.to_text("u"),
        Format::Latex => format!("F_{{{}}} = {}", root_latex(&r.d), f.to_latex("u")),
    })
}

fn gvector(req: &RootRequest) -> Result<String, Failure> {
    let r = resolve(req)?;
    let g = match req.method {
        Method::Closed => r
            .parsed
            .classification
            .to_original(&g_vector_closed(&r.canonical()?, &r.canonical_d)?),
        Method::Oracle => r.oracle_table()?.get(&r.d).expect("every positive root is reached").g.clone(),
    };
    Ok(match req.format {
        Format::Json => json(&GVectorDoc {
            header: r.header(Some(req.method)),
            g,
        }),
        Format::Text => g.to_string(),
        Format::Latex => format!("\\mathbf{{g}}_{{{}}} = {}", root_latex(&r.d), root_latex(&g)),
    })
}

fn quantum(req: &RootRequest, d_scale: i64) -> Result<String, Failure> {
    if req.method == Method::Oracle {
        return Err(input_error("quantum F-polynomials are only available with --method closed".into()));
    }
    let r = resolve(req)?;
    let cm = r.canonical()?;
    let canonical = quantum_f_polynomial_closed(&cm, d_scale, &r.canonical_d)?;
    let f = quantum_to_original(&r, &canonical)?;
    Ok(match req.format {
        Format::Json => json(&QuantumDoc {
            header: r.header(None),
            d_scale,
            f,
        }),
        Format::Text => f.to_text(),
        Format::Latex => format!("F_{{{}}} = {}", root_latex(&r.d), f.to_latex()),
    })
}

fn quantum_to_original(r: &Resolved, x: &QuantumTorusElement) -> Result<QuantumTorusElement, Failure> {
    let c = &r.parsed.classification;
    let canonical_hat = x.torus().delta_hat().entries();
    let mut hat = vec![0; canonical_hat.len()];
    for (p, &o) in c.relabel.iter().enumerate() {
        hat[o] = canonical_hat[p];
    }
    let torus: Arc<QuantumTorus> = QuantumTorus::new(&r.parsed.matrix, SkewSymmetrizer::new(hat))?;
    let mut out = QuantumTorusElement::zero(&torus);
    for (a, coeff) in x.terms() {
        out.add_term(c.to_original(&RootVector::new(a.clone())), coeff.clone());
    }
    Ok(out)
}

fn enumerate(input: &str, format: Format) -> Result<String, Failure> {
    let parsed = parse_input(&read_source(input)?)?;
    let table = enumerate_finite_type(&parsed.matrix, DEFAULT_CAP)?;
    let c = &parsed.classification;
    Ok(match format {
        Format::Json => json(&EnumerateDoc {
            cartan: c.cartan.to_string(),
            rank: c.cartan.rank,
            seeds_visited: table.seeds_visited,
            table: &table,
        }),
        Format::Text => table
            .records()
            .map(|r| format!("d = {}  g = {}  F = {}", r.d, r.g, r.f.to_text("u")))
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Latex => table
            .records()
            .map(|r| format!("F_{{{}}} &= {} \\\\", root_latex(&r.d), r.f.to_latex("u")))
            .collect::<Vec<_>>()
            .join("\n"),
    })
}

fn verify(suite: &str, max_rank: usize, format: Format) -> Result<(String, u8), Failure> {
    let suites = Suite::parse(suite)?;
    if max_rank == 0 {
        return Err(input_error("--max-rank must be at least 1".into()));
    }
    let report = run_suites(&suites, max_rank)?;
    let code = if report.passed { 0 } else { 2 };
    let out = match format {
        Format::Json => json(&report),
        Format::Text | Format::Latex => verify_text(&report),
    };
    Ok((out, code))
}

fn verify_text(report: &VerifyReport) -> String {
    let mut lines = Vec::new();
    for s in &report.suites {
        let status = if s.passed() { "ok" } else { "MISMATCH" };
        lines.push(format!("{}: {} cases, {} failures, {status}", s.suite, s.cases, s.failures));
        if let Some(cx) = &s.counterexample {
            let arrows: Vec<String> = cx.orientation.iter().map(|[a, b]| format!("{a}->{b}")).collect();
            let show = |v: &Option<RootVector>| v.as_ref().map_or("-".to_string(), |r| r.to_string());
            lines.push(format!(
                "  first counterexample: {} arrows [{}] d = {} e = {}: {}",
                cx.cartan,
                arrows.join(" "),
                show(&cx.d),
                show(&cx.e),
                cx.detail
            ));
        }
    }
    lines.join("\n")
}

/// `\mathbf{e}_{1} + 2\mathbf{e}_{2}` style vector.
fn root_latex(v: &RootVector) -> String {
    let mut s = String::new();
    for (i, &c) in v.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let sign = if c < 0 { "-" } else { "+" };
        if s.is_empty() {
            if c < 0 {
                s.push('-');
            }
        } else {
            s.push_str(&format!(" {sign} "));
        }
        if c.abs() != 1 {
            s.push_str(&c.abs().to_string());
        }
        s.push_str(&format!("\\mathbf{{e}}_{{{}}}", i + 1));
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}
