//! `methodgraph` subcommands. Summaries go to standard output, artifacts only
//! to files.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use methodgraph_core::bench::{
    run_lineage_benchmark, synthesize_graph, BenchError, BenchReport, HeuristicJudge, ReferenceGraph, ScoringMode,
    SynthGraphParams,
};
use methodgraph_core::evaluator::{
    apply_adjudication, evaluate_idea, AdjudicationError, AdjudicatorVerdict, EvalEnv, EvaluationReport, IdeaProfile,
};
use methodgraph_core::generator::{
    build_gap_summary, generate_proposal, select_strategy, verify_certificate, Proposal, Proposer, ProposerError,
    ScriptedProposer,
};
use methodgraph_core::graph::{post_check, project_method_dag, MethodDag, MethodDagError};
use methodgraph_core::lineage::{lineage_from_seeds, Algorithm, LineageError};
use methodgraph_core::retrieval::{retrieve_context, Corpus, HashEmbedder, LexicalReranker};
use methodgraph_core::{AliasRegistry, NodeId};

use crate::artifacts::{chain_record, check_chain, metric_csv, ChainRecord};
use crate::config::{Config, EmbedderKind, RerankerKind};
use crate::io::{
    dump_edges, dump_nodes, load_graph, load_registry, read_json, read_text, to_json, to_jsonl, write_text, IoError,
    LoadedGraph,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Lineage(#[from] LineageError),
    #[error(transparent)]
    Bench(#[from] BenchError),
    #[error(transparent)]
    MethodDag(#[from] MethodDagError),
    #[error("adjudication: {0}")]
    Adjudication(#[from] AdjudicationError),
    #[error("{count} edge(s) failed the post-check; first: {first}")]
    PostCheck { count: usize, first: String },
    #[error("{0} providers are adapter-defined and not built in")]
    ExternalProvider(&'static str),
    #[error("refusing to write invalid artifact {}: {reason}", path.display())]
    InvalidArtifact { path: PathBuf, reason: String },
}

#[derive(Debug, Parser)]
#[command(
    name = "methodgraph",
    version,
    about = "Lineage, evaluation and proposal tooling over typed method-evolution graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// nodes.jsonl
    #[arg(long)]
    pub graph_nodes: PathBuf,
    /// edges.jsonl
    #[arg(long)]
    pub graph_edges: PathBuf,
    /// method_seeds.jsonl with curated method-level relations
    #[arg(long)]
    pub method_seeds: Option<PathBuf>,
    /// aliases.json
    #[arg(long)]
    pub aliases: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Common {
    /// config.json; built-in defaults when absent
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Root seed every random component derives its stream from
    #[arg(long)]
    pub seed: Option<u64>,
}

impl Common {
    fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    BestChain,
    Union,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load and post-check a graph; exit 0 iff clean
    Validate {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Reconstruct lineage chains for the methods named in a query
    Lineage {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        query: String,
        /// sgt-mcts, beam@N or random-walk[@ROLLOUTS]
        #[arg(long, default_value = "sgt-mcts", value_parser = parse_algorithm)]
        algo: Algorithm,
        #[arg(long, default_value = "chains.jsonl")]
        out: PathBuf,
    },
    /// Score an idea profile
    Evaluate {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        common: Common,
        /// idea.json with problem, innovation, implementation, target
        #[arg(long)]
        idea: PathBuf,
        /// Adjudicator verdict to apply as one-sided bounds
        #[arg(long)]
        verdict: Option<PathBuf>,
        #[arg(long, default_value = "report.json")]
        out: PathBuf,
    },
    /// Produce one gap-grounded proposal
    Generate {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        query: String,
        /// Canned proposer output; without it the proposer is unavailable
        /// and the template fallback is used
        #[arg(long)]
        proposer_response: Option<PathBuf>,
        #[arg(long, default_value = "proposal.json")]
        out: PathBuf,
    },
    /// Score lineage algorithms against a reference graph
    Bench {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        common: Common,
        /// reference.json with methods, edges and chains
        #[arg(long)]
        reference: PathBuf,
        /// Comma-separated algorithms; config defaults when absent
        #[arg(long, value_delimiter = ',', value_parser = parse_algorithm)]
        algos: Vec<Algorithm>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Also write the metric table as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value = "bench_report.json")]
        out: PathBuf,
    },
    /// Write a synthetic graph with its ground-truth reference
    Synth {
        #[command(flatten)]
        common: Common,
        /// Generator parameters (JSON); defaults when absent
        #[arg(long)]
        params: Option<PathBuf>,
        /// Output directory for nodes.jsonl, edges.jsonl and reference.json
        #[arg(long, default_value = "synth")]
        out: PathBuf,
    },
}

pub fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    let (name, arg) = s.split_once('@').map_or((s, None), |(n, a)| (n, Some(a)));
    let num = |a: &str| a.parse::<u32>().map_err(|_| format!("`{a}` is not a positive integer"));
    match (name, arg) {
        ("sgt-mcts", None) => Ok(Algorithm::SgtMcts),
        ("beam", Some(w)) => match num(w)? {
            0 => Err("beam width must be positive".into()),
            w => Ok(Algorithm::Beam { width: w as usize }),
        },
        ("random-walk", None) => Ok(Algorithm::RandomWalk { rollouts: 200 }),
        ("random-walk", Some(r)) => Ok(Algorithm::RandomWalk { rollouts: num(r)? }),
        _ => Err(format!("unknown algorithm `{s}` (expected sgt-mcts, beam@N or random-walk[@N])")),
    }
}

struct Session {
    config: Config,
    loaded: LoadedGraph,
    registry: AliasRegistry,
}

impl Session {
    fn open(graph: &GraphArgs, common: &Common) -> Result<Self, CliError> {
        let config = Config::load(common.config.as_deref())?;
        let loaded = load_graph(&graph.graph_nodes, &graph.graph_edges, graph.method_seeds.as_deref())?;
        let registry = load_registry(&loaded.graph, graph.aliases.as_deref(), &config.aliases.version_suffixes)?;
        Ok(Self { config, loaded, registry })
    }

    fn providers(&self, seed: u64) -> Result<(HashEmbedder, LexicalReranker), CliError> {
        let p = &self.config.providers;
        if p.embedder.kind == EmbedderKind::External {
            return Err(CliError::ExternalProvider("external embedding"));
        }
        if p.reranker.kind == RerankerKind::External {
            return Err(CliError::ExternalProvider("external rerank"));
        }
        Ok((
            HashEmbedder { dim: p.embedder.dim, seed },
            LexicalReranker { scale: p.reranker.scale, offset: p.reranker.offset },
        ))
    }

    fn dag(&self) -> Result<MethodDag, CliError> {
        Ok(MethodDag::lenient(&self.loaded.graph, &self.loaded.seeds)?)
    }
}

fn invalid(path: &Path, reason: impl Into<String>) -> CliError {
    CliError::InvalidArtifact { path: path.into(), reason: reason.into() }
}

/// Runs one parsed command.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate { graph, common } => validate(&graph, &common),
        Command::Lineage { graph, common, query, algo, out } => lineage(&graph, &common, &query, algo, &out),
        Command::Evaluate { graph, common, idea, verdict, out } => {
            evaluate(&graph, &common, &idea, verdict.as_deref(), &out)
        }
        Command::Generate { graph, common, query, proposer_response, out } => {
            generate(&graph, &common, &query, proposer_response.as_deref(), &out)
        }
        Command::Bench { graph, common, reference, algos, mode, csv, out } => {
            bench(&graph, &common, &reference, algos, mode, csv.as_deref(), &out)
        }
        Command::Synth { common, params, out } => synth(&common, params.as_deref(), &out),
    }
}

fn validate(graph: &GraphArgs, common: &Common) -> Result<(), CliError> {
    let s = Session::open(graph, common)?;
    let g = &s.loaded.graph;
    project_method_dag(g, &s.loaded.seeds)?;
    let report = post_check(g, s.config.graph.year_tolerance);
    println!(
        "{} nodes, {} edges, {} causal edges accepted, {} rejected, {} duplicate(s) dropped",
        g.node_count(),
        g.edges().len(),
        report.accepted.len(),
        report.rejected.len(),
        s.loaded.warnings.len()
    );
    for (edge, reason) in &report.rejected {
        println!("rejected {edge}: {reason}");
    }
    match report.rejected.first() {
        None => Ok(()),
        Some((edge, reason)) => {
            Err(CliError::PostCheck { count: report.rejected.len(), first: format!("{edge}: {reason}") })
        }
    }
}

fn lineage(graph: &GraphArgs, common: &Common, query: &str, algo: Algorithm, out: &Path) -> Result<(), CliError> {
    let s = Session::open(graph, common)?;
    let g = &s.loaded.graph;
    let seeds: Vec<NodeId> = s.registry.methods_in(query).into_iter().filter(|m| g.contains(m)).collect();
    let records: Vec<ChainRecord> = if seeds.is_empty() {
        eprintln!("no exact match: the query names no known method");
        Vec::new()
    } else {
        let result = lineage_from_seeds(g, &seeds, algo, &s.config.lineage, common.seed())?;
        for c in &result.chains {
            check_chain(g, c).map_err(|r| invalid(out, r))?;
        }
        result.chains.iter().map(chain_record).collect()
    };
    write_text(out, &to_jsonl(&records))?;
    let names: Vec<&str> = seeds.iter().map(NodeId::as_str).collect();
    println!("{}: {} chain(s) from seeds [{}]", algo.name(), records.len(), names.join(", "));
    if let Some(top) = records.first() {
        println!("top: {}", join(&top.nodes));
    }
    Ok(())
}

fn join(ids: &[NodeId]) -> String {
    ids.iter().map(NodeId::as_str).collect::<Vec<_>>().join(" -> ")
}

fn check_report(report: &EvaluationReport, config: &Config) -> Result<(), String> {
    if !(1.0..=10.0).contains(&report.overall) {
        return Err(format!("overall {} outside [1, 10]", report.overall));
    }
    if report.fallback_used {
        return (report.overall == config.evaluator.fallback_overall)
            .then_some(())
            .ok_or_else(|| "fallback report must carry the fallback score".into());
    }
    let post = report.post_flag_scores.as_ref().ok_or("missing post-flag scores")?;
    if post.as_array().iter().any(|s| !(1.0..=10.0).contains(s)) {
        return Err("dimension score outside [1, 10]".into());
    }
    Ok(())
}

fn evaluate(
    graph: &GraphArgs,
    common: &Common,
    idea: &Path,
    verdict: Option<&Path>,
    out: &Path,
) -> Result<(), CliError> {
    let s = Session::open(graph, common)?;
    let profile: IdeaProfile = read_json(idea)?;
    let (embedder, reranker) = s.providers(common.seed())?;
    let corpus = Corpus::build(&s.loaded.graph, &s.registry);
    let dag = s.dag()?;
    let env = EvalEnv { corpus: &corpus, dag: &dag, embedder: &embedder, reranker: &reranker };
    let mut report = evaluate_idea(&profile, &env, &s.config.evaluator);
    if let Some(v) = verdict {
        let verdict: AdjudicatorVerdict = read_json(v)?;
        report = apply_adjudication(&report, &verdict, &s.config.evaluator)?;
    }
    check_report(&report, &s.config).map_err(|r| invalid(out, r))?;
    write_text(out, &to_json(&report))?;
    match &report.post_flag_scores {
        Some(p) => println!(
            "overall {:.3} (N {:.2}, F {:.2}, S {:.2}, V {:.2}, C {:.2}, omega {:+.2}){}",
            report.overall,
            p.novelty,
            p.feasibility,
            p.significance,
            p.validity,
            p.clarity,
            report.omega,
            if report.adjudicated { ", adjudicated" } else { "" }
        ),
        None => println!("overall {:.3} (fallback: no method resolved)", report.overall),
    }
    Ok(())
}

/// Replays a canned response file; the proposer is unavailable without one.
struct FileProposer(Option<ScriptedProposer>);

impl Proposer for FileProposer {
    fn propose(&self, prompt: &str) -> Result<String, ProposerError> {
        match &self.0 {
            Some(p) => p.propose(prompt),
            None => Err(ProposerError::Unavailable("no proposer configured".into())),
        }
    }
}

fn check_proposal(p: &Proposal, s: &Session) -> Result<(), String> {
    match &p.certificate {
        Some(c) if verify_certificate(c, &s.loaded.graph) && !p.degenerate => Ok(()),
        Some(_) => Err("certificate does not verify against the graph".into()),
        None if p.degenerate => Ok(()),
        None => Err("non-degenerate proposal without certificate".into()),
    }
}

fn generate(
    graph: &GraphArgs,
    common: &Common,
    query: &str,
    response: Option<&Path>,
    out: &Path,
) -> Result<(), CliError> {
    let s = Session::open(graph, common)?;
    let g = &s.loaded.graph;
    let corpus = Corpus::build(g, &s.registry);
    let dag = s.dag()?;
    let context = retrieve_context(query, &corpus, &s.config.retrieval);
    let seeds: Vec<NodeId> = s.registry.methods_in(query).into_iter().filter(|m| g.contains(m)).collect();
    let chains = if seeds.is_empty() {
        Vec::new()
    } else {
        lineage_from_seeds(g, &seeds, Algorithm::SgtMcts, &s.config.lineage, common.seed())?.chains
    };
    let summary = build_gap_summary(&context, &chains, &corpus, &dag, &s.config.generator);
    let strategy = select_strategy(&summary, &s.config.generator);
    let proposer = FileProposer(match response {
        Some(p) => Some(ScriptedProposer::new(vec![Ok(read_text(p)?)])),
        None => None,
    });
    let outcome = generate_proposal(&summary, strategy, &proposer, g, &s.config.generator);
    check_proposal(&outcome.proposal, &s).map_err(|r| invalid(out, r))?;
    write_text(out, &to_json(&outcome.proposal))?;
    println!("strategy {}: {}", strategy.as_str(), outcome.proposal.title);
    if let Some(reason) = &outcome.fallback_reason {
        println!("fallback: {}", serde_json::to_string(reason).expect("reason serializes"));
    }
    Ok(())
}

fn check_bench(report: &BenchReport) -> Result<(), String> {
    let unit = |x: f64| (0.0..=1.0).contains(&x);
    for a in &report.algorithms {
        if ![a.nmr, a.err, a.psc, a.nr, a.er, a.cas].into_iter().all(unit) {
            return Err(format!("{} has a metric outside [0, 1]", a.algorithm));
        }
    }
    Ok(())
}

fn bench(
    graph: &GraphArgs,
    common: &Common,
    reference: &Path,
    algos: Vec<Algorithm>,
    mode: Option<ModeArg>,
    csv: Option<&Path>,
    out: &Path,
) -> Result<(), CliError> {
    let s = Session::open(graph, common)?;
    let reference: ReferenceGraph = read_json(reference)?;
    let mut config = s.config.bench.clone();
    if !algos.is_empty() {
        config.algorithms = algos;
    }
    if let Some(m) = mode {
        config.mode = match m {
            ModeArg::BestChain => ScoringMode::BestChain,
            ModeArg::Union => ScoringMode::Union,
        };
    }
    let report =
        run_lineage_benchmark(&s.loaded.graph, &s.registry, &reference, &config, &HeuristicJudge, common.seed())?;
    check_bench(&report).map_err(|r| invalid(out, r))?;
    write_text(out, &to_json(&report))?;
    if let Some(path) = csv {
        write_text(path, &metric_csv(&report))?;
    }
    println!("{:<14} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6}", "algorithm", "NMR", "ERR", "PSC", "NR", "ER", "CAS");
    for a in &report.algorithms {
        println!(
            "{:<14} {:>6.3} {:>6.3} {:>6.3} {:>6.3} {:>6.3} {:>6.3}",
            a.algorithm, a.nmr, a.err, a.psc, a.nr, a.er, a.cas
        );
    }
    for w in &report.warnings {
        println!("warning: {w}");
    }
    Ok(())
}

fn synth(common: &Common, params: Option<&Path>, out: &Path) -> Result<(), CliError> {
    let config = Config::load(common.config.as_deref())?;
    let mut p: SynthGraphParams = match params {
        Some(path) => read_json(path)?,
        None => SynthGraphParams::default(),
    };
    if let Some(seed) = common.seed {
        p.seed = seed;
    }
    let (graph, reference) = synthesize_graph(&p)?;
    let report = post_check(&graph, config.graph.year_tolerance);
    if let Some((edge, reason)) = report.rejected.first() {
        return Err(invalid(out, format!("synthetic edge {edge} fails the post-check: {reason}")));
    }
    reference.validate()?;
    write_text(&out.join("nodes.jsonl"), &dump_nodes(&graph))?;
    write_text(&out.join("edges.jsonl"), &dump_edges(&graph))?;
    write_text(&out.join("reference.json"), &to_json(&reference))?;
    println!(
        "{} nodes, {} edges, {} reference chain(s) written to {}",
        graph.node_count(),
        graph.edges().len(),
        reference.chains.len(),
        out.display()
    );
    Ok(())
}
