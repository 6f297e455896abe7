//! `ktree`: dataset generation, exact ceilings, circuit compilation,
//! verification and prediction diagnostics for prerequisite-tree tasks.
//!
//! Exit codes: 0 ok, 1 verification failure or runtime error, 2 usage or
//! configuration error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ktree_core::analysis::ceilings;
use ktree_core::circuits::{
    bounded_fanin_gadget_depth, check_monotone, compile_tree_to_bounded_fanin,
    compile_tree_to_threshold, Circuit,
};
use ktree_core::datasets::{
    self, depth_for_leaves, generate_split, read_examples, DatasetConfig, Encoding, SplitSizes,
};
use ktree_core::diagnose::{
    constant_predictions, diagnose, oracle_predictions, PredictionFile, PredictionHeader,
};
use ktree_core::trees::{build_balanced_tree_with, BuildOptions, NodeKind, PrereqTree, RuleSpec};
use ktree_core::verify::{audit_examples, check_circuit_against_tree, run_small_exhaustive};
use ktree_core::Error;

#[derive(Parser)]
#[command(name = "ktree", version, about = "Prerequisite-tree evaluation, circuits and datasets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate seeded train/val/test JSONL splits and a manifest.
    GenData(GenData),
    /// Print exact Bayes-sum and permuted-oracle ceilings.
    Stats(Stats),
    /// Compile a balanced tree to a circuit and print metrics.
    CompileCircuit(CompileCircuit),
    /// Run exhaustive suites, audit a dataset, or check a circuit file.
    Verify(Verify),
    /// Write oracle (or constant) predictions for a dataset file.
    OraclePredict(OraclePredict),
    /// Compare predictions on original and permuted test sets.
    Diagnose(Diagnose),
}

#[derive(Clone, Copy, ValueEnum)]
enum EncodingArg {
    Flat,
    Scaffold,
}

impl From<EncodingArg> for Encoding {
    fn from(e: EncodingArg) -> Self {
        match e {
            EncodingArg::Flat => Encoding::Flat,
            EncodingArg::Scaffold => Encoding::Scaffold,
        }
    }
}

#[derive(Args)]
struct GenData {
    #[arg(long)]
    depth: usize,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "flat")]
    encoding: EncodingArg,
    #[arg(long, default_value_t = 20_000)]
    train: usize,
    #[arg(long, default_value_t = 5_000)]
    val: usize,
    #[arg(long, default_value_t = 5_000)]
    test: usize,
    /// Also write test_perm.jsonl with shuffled leaves and original labels.
    #[arg(long)]
    permuted: bool,
    /// Output directory (default: data/d<depth>-<encoding>).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Stats {
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// A depth `D` or an inclusive range `A..B`.
    #[arg(long, value_parser = parse_depths)]
    depth: DepthRange,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    BoundedFanin,
    Threshold,
}

#[derive(Args)]
struct TreeArgs {
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long)]
    depth: usize,
    /// maj, all, any, alt-all or alt-any.
    #[arg(long, default_value = "maj")]
    rule: String,
    /// Permit MAJ(k) with even or small k.
    #[arg(long)]
    allow_any_arity: bool,
}

impl TreeArgs {
    fn build(&self) -> Result<PrereqTree, Error> {
        let spec: RuleSpec = self.rule.parse()?;
        build_balanced_tree_with(
            self.k,
            self.depth,
            spec,
            BuildOptions {
                allow_any_majority_arity: self.allow_any_arity,
            },
        )
    }
}

#[derive(Args)]
struct CompileCircuit {
    #[command(flatten)]
    tree: TreeArgs,
    #[arg(long, value_enum, default_value = "bounded-fanin")]
    target: Target,
    #[arg(long)]
    check_monotone: bool,
    /// Write the circuit JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Verify {
    /// Named suite; only `small-exhaustive` exists.
    #[arg(long)]
    suite: Option<String>,
    /// Dataset directory (with manifest) or single JSONL file to audit.
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// Arity used when auditing a bare JSONL file.
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Circuit JSON to check against the tree given by --tree-depth/--rule.
    #[arg(long)]
    circuit: Option<PathBuf>,
    #[arg(long)]
    tree_depth: Option<usize>,
    #[arg(long, default_value = "maj")]
    rule: String,
}

#[derive(Args)]
struct OraclePredict {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Predict this bit everywhere instead of running the oracle.
    #[arg(long)]
    constant: Option<u8>,
    #[arg(long)]
    model_tag: Option<String>,
}

#[derive(Args)]
struct Diagnose {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long)]
    permuted_dataset: PathBuf,
    #[arg(long)]
    predictions: PathBuf,
    #[arg(long)]
    predictions_permuted: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug)]
struct DepthRange(usize, usize);

fn parse_depths(s: &str) -> Result<DepthRange, String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (parse(a)?, parse(b.trim_start_matches('='))?);
            if a > b {
                return Err(format!("empty range {s}"));
            }
            Ok(DepthRange(a, b))
        }
        None => parse(s).map(|d| DepthRange(d, d)),
    }
}

enum Failure {
    Usage(String),
    Verification(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::SizeLimit(_) | Error::Arity { .. } => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::GenData(a) => cmd_gen_data(a),
        Command::Stats(a) => cmd_stats(a),
        Command::CompileCircuit(a) => cmd_compile_circuit(a),
        Command::Verify(a) => cmd_verify(a),
        Command::OraclePredict(a) => cmd_oracle_predict(a),
        Command::Diagnose(a) => cmd_diagnose(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn cmd_gen_data(a: GenData) -> CmdResult {
    let encoding: Encoding = a.encoding.into();
    let cfg = DatasetConfig {
        k: a.k,
        depth: a.depth,
        p: a.p,
        sizes: SplitSizes {
            train: a.train,
            val: a.val,
            test: a.test,
        },
        seed: a.seed,
        encoding,
        permuted: a.permuted,
    };
    let out = a
        .out
        .unwrap_or_else(|| PathBuf::from(format!("data/d{}-{encoding}", a.depth)));
    let manifest = generate_split(&cfg, &out)?;
    for f in &manifest.files {
        println!(
            "{}: {} examples, label mean {:.4}",
            out.join(&f.file).display(),
            f.count,
            f.label_mean
        );
    }
    println!("{}: config {}", out.join(datasets::MANIFEST_FILE).display(), manifest.config_hash);
    Ok(())
}

fn cmd_stats(a: Stats) -> CmdResult {
    let DepthRange(lo, hi) = a.depth;
    let rows = (lo..=hi)
        .map(|d| ceilings(a.k, d, a.p))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = std::io::stdout().lock();
    if a.json {
        serde_json::to_writer_pretty(&mut out, &rows).map_err(|e| Failure::Runtime(e.to_string()))?;
        writeln!(out)?;
        return Ok(());
    }
    writeln!(
        out,
        "{:>5} {:>6} {:>10} {:>10} {:>10}",
        "depth", "n", "bayes_sum", "perm_orac", "majority"
    )?;
    for r in &rows {
        writeln!(
            out,
            "{:>5} {:>6} {:>10.3} {:>10.3} {:>10.3}",
            r.depth,
            r.leaves,
            100.0 * r.bayes_sum,
            100.0 * r.permuted_oracle,
            100.0 * r.majority_class
        )?;
    }
    Ok(())
}

fn cmd_compile_circuit(a: CompileCircuit) -> CmdResult {
    let tree = a.tree.build()?;
    let circuit = match a.target {
        Target::BoundedFanin => compile_tree_to_bounded_fanin(&tree)?,
        Target::Threshold => compile_tree_to_threshold(&tree)?,
    };
    let json = circuit.to_json()?;
    match &a.out {
        Some(path) => std::fs::write(path, json + "\n")?,
        None => println!("{json}"),
    }
    let m = circuit.metrics();
    let per_level = match (a.target, tree.nodes()[0].kind) {
        (Target::BoundedFanin, NodeKind::Internal(rule)) => {
            Some(bounded_fanin_gadget_depth(rule, a.tree.k)?)
        }
        (Target::Threshold, _) => Some(1),
        _ => None,
    };
    eprintln!(
        "metrics: depth={} size={} inputs={} tree_depth={} per_level_depth={}",
        m.depth,
        m.size,
        circuit.n_inputs(),
        tree.depth(),
        per_level.map_or("-".to_string(), |c| c.to_string())
    );
    if a.check_monotone {
        let rep = check_monotone(&circuit);
        match rep.violation {
            None => eprintln!("monotone: true"),
            Some(v) => eprintln!("monotone: false (gate {}: {})", v.gate, v.reason),
        }
    }
    Ok(())
}

fn cmd_verify(a: Verify) -> CmdResult {
    if a.suite.is_none() && a.dataset.is_none() && a.circuit.is_none() {
        return Err(Failure::Usage("give --suite, --dataset or --circuit".into()));
    }
    let mut failed = Vec::new();

    if let Some(suite) = &a.suite {
        if suite != "small-exhaustive" {
            return Err(Failure::Usage(format!("unknown suite {suite:?}")));
        }
        let report = run_small_exhaustive();
        for c in &report.checks {
            println!("[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        let bad = report.checks.iter().filter(|c| !c.passed).count();
        println!("{} checks, {bad} failed", report.checks.len());
        if bad > 0 {
            failed.push(format!("{bad} suite checks failed"));
        }
    }

    if let Some(path) = &a.dataset {
        for (file, tree, examples) in load_dataset(path, a.k)? {
            let report = audit_examples(&tree, &examples);
            for f in &report.failures {
                println!("  {}: {f}", file.display());
            }
            println!(
                "[{}] {}: {} examples audited",
                if report.passed() { "PASS" } else { "FAIL" },
                file.display(),
                report.checked
            );
            if !report.passed() {
                failed.push(format!("{} has bad examples", file.display()));
            }
        }
    }

    if let Some(path) = &a.circuit {
        let depth = a
            .tree_depth
            .ok_or_else(|| Failure::Usage("--circuit needs --tree-depth".into()))?;
        let tree = TreeArgs {
            k: a.k,
            depth,
            rule: a.rule.clone(),
            allow_any_arity: true,
        }
        .build()?;
        let circuit = Circuit::from_json(&std::fs::read_to_string(path)?)?;
        match check_circuit_against_tree(&tree, &circuit)? {
            None => println!("[PASS] {} computes the tree on all inputs", path.display()),
            Some(ce) => {
                println!("[FAIL] {}: counterexample {ce}", path.display());
                failed.push(format!("counterexample {ce}"));
            }
        }
    }

    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(failed.join("; ")))
    }
}

type LoadedSplit = (PathBuf, PrereqTree, Vec<datasets::Example>);

/// Reads a dataset directory via its manifest, or a single JSONL file whose
/// depth is inferred from the leaf count.
fn load_dataset(path: &Path, k: usize) -> Result<Vec<LoadedSplit>, Failure> {
    if path.is_dir() {
        let manifest = datasets::read_manifest(path)?;
        let tree = manifest.config.tree()?;
        return datasets::manifest_paths(path, &manifest)
            .into_iter()
            .map(|file| {
                let examples = read_examples(&file)?;
                Ok((file, tree.clone(), examples))
            })
            .collect();
    }
    let examples = read_examples(path)?;
    let tree = tree_for_examples(&examples, k)?;
    Ok(vec![(path.to_path_buf(), tree, examples)])
}

fn tree_for_examples(examples: &[datasets::Example], k: usize) -> Result<PrereqTree, Failure> {
    let n = examples.first().map_or(1, |e| e.leaves.len());
    let depth = depth_for_leaves(k, n)
        .ok_or_else(|| Failure::Usage(format!("{n} leaves is not a power of k={k}")))?;
    Ok(build_balanced_tree_with(k, depth, RuleSpec::Majority, BuildOptions::default())?)
}

fn cmd_oracle_predict(a: OraclePredict) -> CmdResult {
    let examples = read_examples(&a.dataset)?;
    let tree = tree_for_examples(&examples, a.k)?;
    let encoding = if examples.iter().any(|e| e.is_scaffold()) {
        Encoding::Scaffold
    } else {
        Encoding::Flat
    };
    let (records, tag) = match a.constant {
        None => (oracle_predictions(&tree, &examples)?, "oracle".to_string()),
        Some(v @ (0 | 1)) => (constant_predictions(&examples, v == 1), format!("constant-{v}")),
        Some(v) => return Err(Failure::Usage(format!("--constant must be 0 or 1, got {v}"))),
    };
    let file = PredictionFile {
        header: PredictionHeader {
            depth: tree.depth(),
            encoding,
            model_tag: a.model_tag.unwrap_or(tag),
        },
        records,
    };
    file.write(&a.out)?;
    println!("{}: {} predictions", a.out.display(), file.records.len());
    Ok(())
}

fn cmd_diagnose(a: Diagnose) -> CmdResult {
    let dataset = read_examples(&a.dataset)?;
    let permuted = read_examples(&a.permuted_dataset)?;
    let preds = PredictionFile::read(&a.predictions)?;
    let preds_perm = PredictionFile::read(&a.predictions_permuted)?;
    let report = diagnose(&dataset, &permuted, &preds, &preds_perm)?;
    let mut out = std::io::stdout().lock();
    if a.json {
        serde_json::to_writer_pretty(&mut out, &report).map_err(|e| Failure::Runtime(e.to_string()))?;
        writeln!(out)?;
        return Ok(());
    }
    writeln!(out, "examples        {}", report.examples)?;
    writeln!(out, "root acc (orig) {:.2}", report.root_acc)?;
    writeln!(out, "root acc (perm) {:.2}", report.root_acc_perm)?;
    writeln!(out, "drop            {:+.2}", report.drop)?;
    if let Some(aux) = report.aux_acc {
        writeln!(out, "aux acc (all)   {aux:.2}")?;
        for (level, acc) in &report.aux_acc_per_level {
            writeln!(out, "  level {level:<2}      {acc:.2}")?;
        }
    }
    if let Some(aux) = report.aux_acc_perm {
        writeln!(out, "aux acc (perm)  {aux:.2}")?;
    }
    Ok(())
}
