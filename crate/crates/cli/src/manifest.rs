use std::path::{Path, PathBuf};

use geneig::solvers::SolverConfig;
use geneig::Result;
use serde::Serialize;

use crate::problem::write_json;

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub label: String,
    pub config: SolverConfig,
    pub seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Record of one CLI invocation. Only files that were written are listed.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub problem: PathBuf,
    pub seed: u64,
    pub runs: Vec<RunRecord>,
    pub outputs: Vec<PathBuf>,
    pub versions: Versions,
}

#[derive(Debug, Clone, Serialize)]
pub struct Versions {
    pub geneig: &'static str,
    pub cli: &'static str,
}

impl RunManifest {
    pub fn new(command: &str, problem: &Path, seed: u64) -> Self {
        Self {
            command: command.to_string(),
            problem: problem.to_path_buf(),
            seed,
            runs: Vec::new(),
            outputs: Vec::new(),
            versions: Versions {
                geneig: geneig::VERSION,
                cli: env!("CARGO_PKG_VERSION"),
            },
        }
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }
}
