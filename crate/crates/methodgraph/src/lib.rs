//! File formats, configuration and the `methodgraph` command line over
//! [`methodgraph_core`].
//!
//! * [`io`]: `nodes.jsonl` / `edges.jsonl` / `method_seeds.jsonl` loading with
//!   line-numbered errors, canonical dumps, and `aliases.json`.
//! * [`config`]: the single `config.json` with every module's constants.
//! * [`artifacts`]: `chains.jsonl` records, pre-write checks and CSV export.
//! * [`cli`]: subcommands `validate`, `lineage`, `evaluate`, `generate`,
//!   `bench` and `synth`.

pub mod artifacts;
pub mod cli;
pub mod config;
pub mod io;

pub use methodgraph_core as core;
