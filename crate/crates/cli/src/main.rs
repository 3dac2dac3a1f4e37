use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use vtorb::constructions::{
    cyclic_quotient, invariant_matching_in, merge_cubic, merge_quartic_in,
};
use vtorb::families::{cubic_corpus, px_digraph, quartic_corpus, FamilySpec};
use vtorb::format::{decode_any, decode_graph6, decode_sparse6, encode_graph6_string, encode_sparse6, read_edge_list, write_edge_list};
use vtorb::verify::{invariants, parse_claims, scan, Report};
use vtorb::{automorphism_group, Error, Graph, Perm, DEFAULT_CAP};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "vtorb", version, about = "Automorphism orders and orbits of vertex-transitive graphs")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Config {
    /// Elements enumerated per group before falling back to sampling.
    #[arg(long, global = true, env = "VTORB_CAP", default_value_t = DEFAULT_CAP,
          value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    cap: usize,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,
    #[arg(long = "input-format", global = true, value_enum, default_value_t = InFormat::Auto)]
    input_format: InFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InFormat {
    /// graph6 or sparse6, decided per line
    Auto,
    G6,
    S6,
    /// `n m` header then one `u v` per line; one graph per file
    Edgelist,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Named,
    Gp,
    Prism,
    Moebius,
    Circulant,
    Lex2k1,
    Px,
    Spx,
    Psi,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Corpus {
    /// cubic family members on at most 64 vertices
    CubicSmall,
    /// C_n[2K_1] for n <= 16, K5 and quartic circulants on at most 32 vertices
    QuarticSmall,
}

#[derive(Subcommand)]
enum Command {
    /// Write a family member (or a built-in corpus) as graph6 lines.
    Gen(GenArgs),
    /// Per-graph invariants as JSON lines.
    Invariants(InputArgs),
    /// Check claims on graphs and print a report.
    Verify(VerifyArgs),
    /// Quotient by the cyclic group of one automorphism.
    Quotient(QuotientArgs),
    /// Contract the invariant matching of a cubic or quartic graph.
    Merge(InputArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, conflicts_with = "corpus", required_unless_present = "corpus")]
    family: Option<Family>,
    #[arg(long, value_enum)]
    corpus: Option<Corpus>,
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    /// Circulant connection set, comma separated.
    #[arg(long, value_delimiter = ',')]
    steps: Vec<usize>,
    /// Write sparse6 instead of graph6.
    #[arg(long)]
    sparse6: bool,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InputArgs {
    /// Input file, `-` for stdin.
    input: String,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Input file, `-` for stdin.
    #[arg(required_unless_present = "family_corpus", conflicts_with = "family_corpus")]
    input: Option<String>,
    #[arg(long, value_enum)]
    family_corpus: Option<Corpus>,
    /// Suites or claim ids, comma separated.
    #[arg(long, default_value = "theorems")]
    suite: String,
    /// Conjecture failures also give exit status 1.
    #[arg(long)]
    strict_conjectures: bool,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct QuotientArgs {
    input: String,
    /// Cycle notation `(0,1,2)(3,4)` or an image list `1,2,0,4,3`.
    /// Defaults to an automorphism of maximal order.
    #[arg(long, allow_hyphen_values = true)]
    element: Option<String>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::Io(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.config.jobs {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let outcome = match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Invariants(a) => cmd_invariants(&cli.config, a),
        Command::Verify(a) => verify(&cli.config, a),
        Command::Quotient(a) => quotient(&cli.config, a),
        Command::Merge(a) => merge(&cli.config, a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(m)) => {
            eprintln!("vtorb: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(m)) => {
            eprintln!("vtorb: {m}");
            ExitCode::from(EXIT_IO)
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn need(value: Option<usize>, flag: &str) -> Result<usize, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("--{flag} is required for this family")))
}

fn family_spec(a: &GenArgs, family: Family) -> Result<FamilySpec, Failure> {
    Ok(match family {
        Family::Named => FamilySpec::named(
            a.name
                .as_deref()
                .ok_or_else(|| Failure::Usage("--name is required for named graphs".into()))?,
        ),
        Family::Gp => FamilySpec::Gp { n: need(a.n, "n")?, k: need(a.k, "k")? },
        Family::Prism => FamilySpec::Prism { n: need(a.n, "n")? },
        Family::Moebius => FamilySpec::Moebius { n: need(a.n, "n")? },
        Family::Circulant => FamilySpec::Circulant { n: need(a.n, "n")?, steps: a.steps.clone() },
        Family::Lex2k1 => FamilySpec::Lex2k1 { n: need(a.n, "n")? },
        Family::Px => FamilySpec::Px { r: need(a.r, "r")?, s: need(a.s, "s")? },
        Family::Spx => FamilySpec::Spx { r: need(a.r, "r")?, s: need(a.s, "s")? },
        Family::Psi => FamilySpec::Psi { r: need(a.r, "r")? },
    })
}

fn corpus_specs(c: Corpus) -> (&'static str, Vec<FamilySpec>) {
    match c {
        Corpus::CubicSmall => ("cubic-small", cubic_corpus(64)),
        Corpus::QuarticSmall => ("quartic-small", quartic_corpus(16, 32)),
    }
}

fn encode(g: &Graph, sparse6: bool) -> String {
    if sparse6 {
        String::from_utf8(encode_sparse6(g)).expect("sparse6 is ASCII")
    } else {
        encode_graph6_string(g)
    }
}

fn gen(a: &GenArgs) -> Outcome {
    let mut text = String::new();
    if let Some(c) = a.corpus {
        for spec in corpus_specs(c).1 {
            text.push_str(&encode(&spec.build()?, a.sparse6));
            text.push('\n');
        }
    } else {
        let spec = family_spec(a, a.family.expect("clap requires a family"))?;
        if let FamilySpec::Px { r, s } = spec {
            // the digraph itself, not its underlying graph
            text = write_edge_list(&px_digraph(r, s)?);
        } else {
            text = encode(&spec.build()?, a.sparse6);
            text.push('\n');
        }
    }
    emit(&a.out, &text)?;
    Ok(0)
}

fn read_source(input: &str) -> Result<String, Failure> {
    if input == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(input).map_err(|e| Failure::Io(format!("{input}: {e}")))
    }
}

fn source_name(input: &str) -> String {
    if input == "-" {
        "stdin".into()
    } else {
        Path::new(input)
            .file_stem()
            .map_or_else(|| input.to_string(), |s| s.to_string_lossy().into_owned())
    }
}

/// Graphs of an input file, each with an id `name:line`.
fn read_graphs(input: &str, format: InFormat) -> Result<Vec<(String, Graph)>, Failure> {
    let text = read_source(input)?;
    let name = source_name(input);
    let bad = |line: usize, e: Error| Failure::Io(format!("{name}:{line}: {e}"));
    if format == InFormat::Edgelist {
        let d = read_edge_list(&text).map_err(|e| bad(1, e))?;
        return Ok(vec![(name, d.underlying_graph())]);
    }
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let g = match format {
            InFormat::G6 => decode_graph6(line.as_bytes()),
            InFormat::S6 => decode_sparse6(line.as_bytes()).map(|s| s.graph),
            _ => decode_any(line.as_bytes()),
        }
        .map_err(|e| bad(i + 1, e))?;
        out.push((format!("{name}:{}", i + 1), g));
    }
    Ok(out)
}

fn json_lines(rows: impl IntoIterator<Item = serde_json::Value>) -> String {
    let mut text = String::new();
    for row in rows {
        text.push_str(&row.to_string());
        text.push('\n');
    }
    text
}

fn cmd_invariants(config: &Config, a: &InputArgs) -> Outcome {
    let graphs = read_graphs(&a.input, config.input_format)?;
    let rows: Vec<_> = graphs
        .iter()
        .map(|(id, g)| {
            let mut v = serde_json::to_value(invariants(g, config.cap)).expect("invariants serialise");
            v.as_object_mut().unwrap().insert("graph".into(), json!(id));
            v
        })
        .collect();
    let text = match config.format {
        OutFormat::Json => json_lines(rows),
        OutFormat::Csv => to_csv(&rows)?,
    };
    emit(&a.out, &text)?;
    Ok(0)
}

/// Flat JSON objects as CSV, columns in the order of the first row.
fn to_csv(rows: &[serde_json::Value]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if let Some(first) = rows.first().and_then(|r| r.as_object()) {
        let keys: Vec<&String> = first.keys().collect();
        w.write_record(&keys).map_err(|e| Failure::Io(e.to_string()))?;
        for row in rows {
            let record: Vec<String> = keys
                .iter()
                .map(|k| match &row[k.as_str()] {
                    serde_json::Value::String(s) => s.clone(),
                    serde_json::Value::Null => String::new(),
                    other => other.to_string(),
                })
                .collect();
            w.write_record(&record).map_err(|e| Failure::Io(e.to_string()))?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv of UTF-8 fields"))
}

fn summary_csv(report: &Report) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["claim", "holds", "fails", "skipped", "inexact"])
        .map_err(|e| Failure::Io(e.to_string()))?;
    for row in report.summary_rows() {
        w.write_record(&row).map_err(|e| Failure::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv of UTF-8 fields"))
}

fn verify(config: &Config, a: &VerifyArgs) -> Outcome {
    let claims = parse_claims(&a.suite).map_err(Failure::Usage)?;
    let (corpus_id, corpus) = match (&a.input, a.family_corpus) {
        (_, Some(c)) => {
            let (id, specs) = corpus_specs(c);
            let graphs = specs
                .into_iter()
                .map(|s| Ok((s.to_string(), s.build()?)))
                .collect::<Result<Vec<_>, Error>>()?;
            (id.to_string(), graphs)
        }
        (Some(input), None) => (source_name(input), read_graphs(input, config.input_format)?),
        (None, None) => return Err(Failure::Usage("an input or --family-corpus is required".into())),
    };
    let report = scan(&corpus_id, &corpus, &claims, config.cap);
    let mut text = match config.format {
        OutFormat::Json => report.to_json(),
        OutFormat::Csv => summary_csv(&report)?,
    };
    if config.format == OutFormat::Json {
        text.push('\n');
    }
    emit(&a.out, &text)?;
    let s = &report.summary;
    if s.conjecture_fails > 0 {
        eprintln!("vtorb: {} conjecture or optional-claim failure(s) found; see the report", s.conjecture_fails);
    }
    if s.proven_fails > 0 {
        eprintln!("vtorb: {} theorem or lemma failure(s) found", s.proven_fails);
        return Ok(EXIT_FAIL);
    }
    if a.strict_conjectures && s.conjecture_fails > 0 {
        return Ok(EXIT_FAIL);
    }
    Ok(0)
}

/// Cycle notation or a list of images.
fn parse_element(text: &str, n: usize) -> Result<Perm, Failure> {
    let bad = |m: String| Failure::Usage(format!("bad --element `{text}`: {m}"));
    let numbers = |s: &str| -> Result<Vec<usize>, Failure> {
        s.split([',', ' '])
            .filter(|t| !t.is_empty())
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad(format!("`{t}` is not a vertex"))))
            .collect()
    };
    let text_t = text.trim();
    if text_t.starts_with('(') {
        let mut cycles = Vec::new();
        for part in text_t.split(')') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let body = part.strip_prefix('(').ok_or_else(|| bad("unbalanced parentheses".into()))?;
            cycles.push(numbers(body)?);
        }
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Perm::from_cycles(n, &refs).map_err(|e| bad(e.to_string()))
    } else {
        let images = numbers(text_t)?;
        if images.len() != n {
            return Err(bad(format!("{} images for {n} vertices", images.len())));
        }
        Perm::from_images(images).map_err(|e| bad(e.to_string()))
    }
}

fn quotient(config: &Config, a: &QuotientArgs) -> Outcome {
    let graphs = read_graphs(&a.input, config.input_format)?;
    let mut rows = Vec::new();
    for (id, g) in &graphs {
        let p = match &a.element {
            Some(text) => parse_element(text, g.order())?,
            None => {
                let aut = automorphism_group(g);
                let meo = aut.meo(config.cap).value;
                aut.find_element(config.cap, |p| p.order() == meo)
                    .value
                    .unwrap_or_else(|| Perm::identity(g.order()))
            }
        };
        if !p.is_automorphism(g) {
            return Err(Failure::Usage(format!("{id}: element is not an automorphism")));
        }
        let q = cyclic_quotient(g, &p)?;
        rows.push(json!({
            "graph": id,
            "element": p.cycle_notation(),
            "order": p.order().to_string(),
            "quotient": encode_graph6_string(&q.quotient),
            "blocks": q.block_sizes.len(),
            "block_sizes": q.block_sizes,
            "block_map": q.block_map,
        }));
    }
    emit(&a.out, &json_lines(rows))?;
    Ok(0)
}

fn merge(config: &Config, a: &InputArgs) -> Outcome {
    let graphs = read_graphs(&a.input, config.input_format)?;
    let mut rows = Vec::new();
    for (id, g) in &graphs {
        let aut = automorphism_group(g);
        let row = match g.valence() {
            Some(3) => invariant_matching_in(g, &aut)
                .map(|t| -> Result<_, Failure> {
                    let m = merge_cubic(g, &t)?;
                    Ok(json!({
                        "graph": id,
                        "kind": "cubic",
                        "merged": encode_graph6_string(&m.merged),
                        "n": m.merged.order(),
                        "valence": m.merged.valence(),
                        "simple": m.simple,
                        "matching": t.iter().collect::<Vec<_>>(),
                    }))
                })
                .transpose()?,
            Some(4) => merge_quartic_in(g, &aut).map(|q| {
                json!({
                    "graph": id,
                    "kind": "quartic",
                    "merged": encode_graph6_string(&q.merge.merged),
                    "n": q.merge.merged.order(),
                    "valence": q.valence,
                    "simple": q.merge.simple,
                    "matching": q.red.iter().collect::<Vec<_>>(),
                })
            }),
            _ => None,
        };
        rows.push(row.unwrap_or_else(|| {
            json!({"graph": id, "kind": null, "reason": "no invariant matching of the required kind"})
        }));
    }
    emit(&a.out, &json_lines(rows))?;
    Ok(0)
}
