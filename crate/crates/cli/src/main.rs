mod render;
mod schema;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use treeaut::autom::{IsometryClass, TreeAut, TreeGroup};
use treeaut::dynamics::{self, DynamicsError, Word};
use treeaut::quotient::{classify_pair, in_gplus, orbit_coloring, project_vertex, sigma_bar};
use treeaut::tree::{HalfTree, RationalEnd};
use treeaut::ursfin::FiniteGroup;

use schema::{aut_to_file, load_aut, load_group, load_tree_group, parse_halftree, parse_vertex, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    NotFound,
    Validation,
    Io,
}

#[derive(Debug, Clone)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Validation,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Io,
            message: message.into(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self.kind {
            ErrorKind::NotFound => 1,
            ErrorKind::Validation => 2,
            ErrorKind::Io => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "treeaut", version, about = "Automorphism groups of colored regular trees with prescribed local action")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a local action pair.
    Classify {
        /// Local action pair file.
        #[arg(long)]
        pair: PathBuf,
    },
    /// Operations on automorphism files.
    Aut {
        /// Local action pair file.
        #[arg(long)]
        pair: PathBuf,
        #[command(subcommand)]
        op: AutOp,
    },
    /// Ping-pong, wandering sets, compression and endpoint searches.
    Dynamics {
        /// Local action pair file.
        #[arg(long)]
        pair: PathBuf,
        #[command(subcommand)]
        op: DynOp,
    },
    /// Uniformly recurrent subgroups of a finite permutation group.
    Ursfin {
        #[command(subcommand)]
        op: UrsOp,
    },
}

#[derive(Subcommand)]
enum AutOp {
    /// The composite `a ∘ b` (apply `b` first).
    Compose { a: PathBuf, b: PathBuf },
    /// The inverse automorphism.
    Inverse { a: PathBuf },
    /// Image of a vertex.
    Eval {
        a: PathBuf,
        #[arg(long)]
        vertex: String,
    },
    /// Membership in the kernel of the quotient morphism.
    Gplus { a: PathBuf },
    /// Elliptic, inversion or hyperbolic, with axis data.
    ClassifyIsometry { a: PathBuf },
}

#[derive(clap::Args)]
struct PingPongArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    /// Half-trees as `base:dir`.
    #[arg(long)]
    u_minus: String,
    #[arg(long)]
    u_plus: String,
    #[arg(long)]
    v_minus: String,
    #[arg(long)]
    v_plus: String,
}

#[derive(Subcommand)]
enum DynOp {
    /// Certify a ping-pong pair and search for short relations.
    Pingpong {
        #[command(flatten)]
        sets: PingPongArgs,
        /// Word length for the relation check.
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        /// Ball radius for the relation check.
        #[arg(long, default_value_t = 10)]
        depth: usize,
    },
    /// Certify a wandering half-tree for a ping-pong pair.
    Wander {
        #[command(flatten)]
        sets: PingPongArgs,
        #[arg(long)]
        omega: String,
        /// Word length for the pairwise-disjointness check.
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Find a word mapping every given half-tree into a target.
    Compress {
        #[arg(long = "gen", required = true)]
        gens: Vec<PathBuf>,
        /// Half-trees whose union is to be compressed.
        #[arg(long = "set", required = true)]
        sets: Vec<String>,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
    /// Find a hyperbolic word whose attracting end lies in a cylinder.
    Endpoint {
        #[arg(long = "gen", required = true)]
        gens: Vec<PathBuf>,
        /// Prefix of the target cylinder.
        #[arg(long)]
        cyl: String,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
}

#[derive(Subcommand)]
enum UrsOp {
    /// Subgroups, URS classes and their Hasse diagram.
    Report {
        #[arg(long)]
        group: PathBuf,
        /// A group normalizing `--group`, acting by conjugation.
        #[arg(long)]
        ambient: Option<PathBuf>,
    },
}

/// A finished document and whether it reports an unsuccessful bounded search.
struct Outcome {
    doc: Value,
    not_found: bool,
}

impl Outcome {
    fn ok(doc: Value) -> Self {
        Outcome { doc, not_found: false }
    }
}

fn document(command: &str, input: Value, key: &str, result: Value, diagnostics: Vec<String>) -> Value {
    let mut map = serde_json::Map::new();
    map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    map.insert("command".into(), json!(command));
    map.insert("input".into(), input);
    map.insert(key.into(), result);
    map.insert("diagnostics".into(), json!(diagnostics));
    Value::Object(map)
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn aut_json(g: &TreeAut) -> Value {
    serde_json::to_value(aut_to_file(g)).expect("serializable")
}

fn end_json(e: &RationalEnd, d: usize) -> Value {
    json!(e.render(d))
}

fn isometry_json(c: &IsometryClass, d: usize) -> Value {
    match c {
        IsometryClass::Elliptic { fixed } => json!({"type": "elliptic", "fixed_vertex": fixed.render(d)}),
        IsometryClass::Inversion { edge } => {
            json!({"type": "inversion", "edge": [edge.0.render(d), edge.1.render(d)]})
        }
        IsometryClass::Hyperbolic {
            length,
            axis_vertex,
            attracting,
            repelling,
        } => json!({
            "type": "hyperbolic",
            "length": length,
            "axis_vertex": axis_vertex.render(d),
            "attracting_end": end_json(attracting, d),
            "repelling_end": end_json(repelling, d),
        }),
    }
}

fn dyn_error(e: DynamicsError) -> CliError {
    match e {
        DynamicsError::NotFound { .. } => CliError {
            kind: ErrorKind::NotFound,
            message: e.to_string(),
        },
        other => CliError::validation(other.to_string()),
    }
}

fn run_classify(pair: &Path) -> Result<Outcome, CliError> {
    let (file, pair) = schema::load_pair(pair)?;
    let report = classify_pair(&pair);
    let diagnostics = report.diagnostics();
    let input = json!({"degree": file.degree, "F": file.f, "Fprime": file.fprime});
    Ok(Outcome::ok(document(
        "classify",
        input,
        "report",
        serde_json::to_value(&report).expect("serializable"),
        diagnostics,
    )))
}

fn run_aut(pair_path: &Path, op: &AutOp) -> Result<Outcome, CliError> {
    let (_, group) = load_tree_group(pair_path)?;
    let d = group.degree();
    let load = |p: &Path| load_aut(p, &group);
    let (name, input, result) = match op {
        AutOp::Compose { a, b } => {
            let g = load(a)?.compose(&load(b)?);
            ("aut compose", json!({"a": path_str(a), "b": path_str(b)}), aut_json(&g))
        }
        AutOp::Inverse { a } => ("aut inverse", json!({"a": path_str(a)}), aut_json(&load(a)?.inverse())),
        AutOp::Eval { a, vertex } => {
            let v = parse_vertex(vertex, d)?;
            let image = load(a)?.apply(&v);
            (
                "aut eval",
                json!({"a": path_str(a), "vertex": v.render(d)}),
                json!({"image": image.render(d)}),
            )
        }
        AutOp::Gplus { a } => {
            let g = load(a)?;
            let coloring = orbit_coloring(group.pair());
            let sb = sigma_bar(&g, &coloring);
            (
                "aut gplus",
                json!({"a": path_str(a)}),
                json!({
                    "in_gplus": in_gplus(&g, &coloring),
                    "r": coloring.r(),
                    "sigma_bar": sb.images().iter().map(|i| i + 1).collect::<Vec<_>>(),
                    "root_projection": project_vertex(g.root_image(), &coloring).letters(),
                }),
            )
        }
        AutOp::ClassifyIsometry { a } => {
            let g = load(a)?;
            ("aut classify-isometry", json!({"a": path_str(a)}), isometry_json(&g.classify_isometry(), d))
        }
    };
    Ok(Outcome::ok(document(name, input, "result", result, Vec::new())))
}

fn generator_names(paths: &[PathBuf]) -> Vec<String> {
    paths
        .iter()
        .map(|p| p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path_str(p)))
        .collect()
}

fn load_pingpong(group: &Arc<TreeGroup>, args: &PingPongArgs) -> Result<(dynamics::PingPongCertificate, Value), CliError> {
    let d = group.degree();
    let a = load_aut(&args.a, group)?;
    let b = load_aut(&args.b, group)?;
    let sets = [&args.u_minus, &args.u_plus, &args.v_minus, &args.v_plus]
        .iter()
        .map(|s| parse_halftree(s, d))
        .collect::<Result<Vec<HalfTree>, _>>()?;
    let input = json!({
        "a": path_str(&args.a),
        "b": path_str(&args.b),
        "u_minus": sets[0].render(d),
        "u_plus": sets[1].render(d),
        "v_minus": sets[2].render(d),
        "v_plus": sets[3].render(d),
    });
    let cert = dynamics::pingpong_certify(&a, &b, &sets[0], &sets[1], &sets[2], &sets[3]).map_err(dyn_error)?;
    Ok((cert, input))
}

fn run_dynamics(pair_path: &Path, op: &DynOp) -> Result<Outcome, CliError> {
    let (_, group) = load_tree_group(pair_path)?;
    let d = group.degree();
    match op {
        DynOp::Pingpong { sets, max_len, depth } => {
            let (cert, input) = load_pingpong(&group, sets)?;
            let relation = dynamics::free_no_relation_check(&cert.a, &cert.b, *max_len, *depth);
            let result = json!({
                "certificate": input,
                "valid": true,
                "relation_check": {
                    "max_len": max_len,
                    "depth": depth,
                    "passed": relation.is_ok(),
                    "witness": relation.err().map(|w| w.to_string()),
                },
            });
            let input = json!({"max_len": max_len, "depth": depth});
            Ok(Outcome::ok(document("dynamics pingpong", input, "result", result, Vec::new())))
        }
        DynOp::Wander { sets, omega, max_len } => {
            let (cert, input) = load_pingpong(&group, sets)?;
            let omega = parse_halftree(omega, d)?;
            dynamics::wandering_certify(&cert, &omega).map_err(dyn_error)?;
            let brute = dynamics::wandering_brute_check(&cert, &omega, *max_len);
            let result = json!({
                "certificate": input,
                "omega": omega.render(d),
                "valid": true,
                "brute_check": {
                    "max_len": max_len,
                    "passed": brute.is_ok(),
                    "witness": brute.err().map(|(x, y)| [x.to_string(), y.to_string()]),
                },
            });
            let input = json!({"omega": omega.render(d), "max_len": max_len});
            Ok(Outcome::ok(document("dynamics wander", input, "result", result, Vec::new())))
        }
        DynOp::Compress {
            gens,
            sets,
            target,
            max_len,
        } => {
            let elements = gens.iter().map(|p| load_aut(p, &group)).collect::<Result<Vec<_>, _>>()?;
            let names = generator_names(gens);
            let halftrees = sets.iter().map(|s| parse_halftree(s, d)).collect::<Result<Vec<_>, _>>()?;
            let target = parse_halftree(target, d)?;
            let input = json!({
                "generators": gens.iter().map(|p| path_str(p)).collect::<Vec<_>>(),
                "sets": halftrees.iter().map(|h| h.render(d)).collect::<Vec<_>>(),
                "target": target.render(d),
                "max_len": max_len,
            });
            search_outcome(
                "dynamics compress",
                input,
                dynamics::compress_search(&elements, &halftrees, &target, *max_len),
                &names,
                *max_len,
            )
        }
        DynOp::Endpoint { gens, cyl, max_len } => {
            let elements = gens.iter().map(|p| load_aut(p, &group)).collect::<Result<Vec<_>, _>>()?;
            let names = generator_names(gens);
            let prefix = parse_vertex(cyl, d)?;
            if prefix.is_root() {
                return Err(CliError::validation("--cyl needs a nonempty prefix"));
            }
            let cylinder = HalfTree::cylinder(&prefix);
            let input = json!({
                "generators": gens.iter().map(|p| path_str(p)).collect::<Vec<_>>(),
                "cyl": prefix.render(d),
                "max_len": max_len,
            });
            let found = dynamics::hyperbolic_endpoint_in(&elements, &cylinder, *max_len);
            let mut outcome = search_outcome("dynamics endpoint", input, found.clone(), &names, *max_len)?;
            if let Ok(word) = found {
                if let IsometryClass::Hyperbolic { attracting, .. } = word.evaluate(&elements).classify_isometry() {
                    outcome.doc["result"]["attracting_end"] = end_json(&attracting, d);
                }
            }
            Ok(outcome)
        }
    }
}

fn search_outcome(
    command: &str,
    input: Value,
    found: Result<Word, DynamicsError>,
    names: &[String],
    max_len: usize,
) -> Result<Outcome, CliError> {
    match found {
        Ok(word) => Ok(Outcome::ok(document(
            command,
            input,
            "result",
            json!({"found": true, "word": word.render(names), "length": word.len()}),
            Vec::new(),
        ))),
        Err(DynamicsError::NotFound { .. }) => Ok(Outcome {
            doc: document(
                command,
                input,
                "result",
                json!({"found": false, "max_len": max_len}),
                vec![format!("no word of length at most {max_len}; this bounds the search and proves nothing")],
            ),
            not_found: true,
        }),
        Err(e) => Err(dyn_error(e)),
    }
}

fn run_ursfin(op: &UrsOp) -> Result<Outcome, CliError> {
    let UrsOp::Report { group, ambient } = op;
    let (file, perm_group) = load_group(group)?;
    let fg = FiniteGroup::new(perm_group).map_err(|e| CliError::validation(e.to_string()))?;
    let classes = match ambient {
        Some(p) => {
            let (_, amb) = load_group(p)?;
            fg.urs_classes_under(&amb).map_err(|e| CliError::validation(e.to_string()))?
        }
        None => fg.urs_classes(),
    };
    let hasse = fg.hasse(&classes);
    let envelopes: Vec<usize> = classes.iter().map(|c| fg.envelope(c).order()).collect();
    let subgroup_count: usize = classes.iter().map(|c| c.size()).sum();
    let result = json!({
        "order": fg.order(),
        "subgroup_count": subgroup_count,
        "class_count": classes.len(),
        "envelope_orders": envelopes,
        "hasse": hasse,
    });
    let input = json!({
        "group": path_str(group),
        "degree": file.degree,
        "generators": file.generators,
        "ambient": ambient.as_ref().map(|p| path_str(p)),
    });
    Ok(Outcome::ok(document("ursfin report", input, "result", result, Vec::new())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Classify { pair } => run_classify(pair),
        Command::Aut { pair, op } => run_aut(pair, op),
        Command::Dynamics { pair, op } => run_dynamics(pair, op),
        Command::Ursfin { op } => run_ursfin(op),
    };
    match outcome {
        Ok(Outcome { doc, not_found }) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&doc).expect("serializable")),
                Format::Text => print!("{}", render::text(&doc)),
            }
            if not_found {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.exit_code())
        }
    }
}
