//! The single `config.json` holding every tunable constant.

use std::path::Path;

use methodgraph_core::alias::DEFAULT_VERSION_SUFFIXES;
use methodgraph_core::bench::BenchConfig;
use methodgraph_core::evaluator::EvaluatorConfig;
use methodgraph_core::generator::GeneratorConfig;
use methodgraph_core::lineage::SearchParams;
use methodgraph_core::retrieval::{HashEmbedder, LexicalReranker, RetrievalConfig};
use serde::{Deserialize, Serialize};

use crate::io::{read_json, IoError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GraphConfig {
    /// Citing papers may predate cited ones by this many years.
    pub year_tolerance: i32,
}

impl Default for GraphConfig {
    fn default() -> Self {
        Self { year_tolerance: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AliasConfig {
    pub version_suffixes: Vec<String>,
}

impl Default for AliasConfig {
    fn default() -> Self {
        Self { version_suffixes: DEFAULT_VERSION_SUFFIXES.iter().map(|s| s.to_string()).collect() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbedderKind {
    TestHash,
    External,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RerankerKind {
    Lexical,
    External,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmbedderConfig {
    pub kind: EmbedderKind,
    pub dim: usize,
}

impl Default for EmbedderConfig {
    fn default() -> Self {
        Self { kind: EmbedderKind::TestHash, dim: HashEmbedder::default().dim }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RerankerConfig {
    pub kind: RerankerKind,
    pub scale: f64,
    pub offset: f64,
}

impl Default for RerankerConfig {
    fn default() -> Self {
        let r = LexicalReranker::default();
        Self { kind: RerankerKind::Lexical, scale: r.scale, offset: r.offset }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProviderConfig {
    pub embedder: EmbedderConfig,
    pub reranker: RerankerConfig,
}

/// Every module's constants, pre-populated with their defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub graph: GraphConfig,
    pub aliases: AliasConfig,
    pub providers: ProviderConfig,
    /// Context retrieval for `generate`; `evaluator.retrieval` drives scoring.
    pub retrieval: RetrievalConfig,
    pub lineage: SearchParams,
    pub evaluator: EvaluatorConfig,
    pub generator: GeneratorConfig,
    pub bench: BenchConfig,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, IoError> {
        path.map_or_else(|| Ok(Self::default()), read_json)
    }
}
