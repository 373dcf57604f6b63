use std::fs;
use std::path::Path;

use geneig::feasible::FeasibleJson;
use geneig::pencil::PencilJson;
use geneig::truss::{TrussJson, TrussProblem};
use geneig::{AffinePencil, Error, FeasibleSet, Result};
use serde::{Deserialize, Serialize};

/// On-disk problem, discriminated by `"kind"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProblemFile {
    Pencil(PencilProblemJson),
    Truss(TrussJson),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PencilProblemJson {
    #[serde(flatten)]
    pub pencil: PencilJson,
    #[serde(flatten)]
    pub set: FeasibleJson,
}

/// A validated problem ready for the solvers.
#[derive(Debug, Clone)]
pub struct Problem {
    pub pencil: AffinePencil,
    pub set: FeasibleSet,
    pub truss: Option<TrussProblem>,
}

impl Problem {
    pub fn from_file(file: &ProblemFile) -> Result<Self> {
        match file {
            ProblemFile::Pencil(p) => {
                let pencil = AffinePencil::from_json(&p.pencil)?;
                let set = FeasibleSet::from_json(&p.set)?;
                if set.lengths().len() != pencil.vars() {
                    return Err(Error::DimensionMismatch {
                        what: "length vector l vs pencil variables",
                        expected: pencil.vars(),
                        found: set.lengths().len(),
                    });
                }
                Ok(Self { pencil, set, truss: None })
            }
            ProblemFile::Truss(t) => {
                let truss = TrussProblem::from_json(t)?;
                Ok(Self {
                    pencil: truss.pencil.clone(),
                    set: truss.set.clone(),
                    truss: Some(truss),
                })
            }
        }
    }

    pub fn to_file(&self) -> ProblemFile {
        match &self.truss {
            Some(t) => ProblemFile::Truss(t.to_json()),
            None => ProblemFile::Pencil(PencilProblemJson {
                pencil: self.pencil.to_json(),
                set: self.set.to_json(),
            }),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let file: ProblemFile = serde_json::from_str(&text)?;
        Self::from_file(&file)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_json(path, &self.to_file())
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
