use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use spreadlab_core::io::write_json;

use crate::CliError;

/// Files produced by one run, held in memory until the run has finished so a
/// failing run leaves nothing behind.
pub struct Artifacts {
    /// File name of the JSON report inside the output directory.
    name: String,
    report: Vec<u8>,
    files: Vec<(String, Vec<u8>)>,
    /// Human-readable table printed when the report goes to a file.
    pub summary: Option<String>,
    /// Set when the run completed but a checked property failed.
    pub failure: Option<String>,
}

/// Common report envelope. Field order is the serialization order.
#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    command: &'a str,
    seed: u64,
    config: &'a C,
    result: &'a R,
}

impl Artifacts {
    pub fn new<C: Serialize, R: Serialize>(command: &str, seed: u64, config: &C, result: &R) -> Result<Self, CliError> {
        let mut report = Vec::new();
        write_json(
            &Envelope {
                command,
                seed,
                config,
                result,
            },
            &mut report,
        )?;
        Ok(Artifacts {
            name: format!("{}.json", command.replace(' ', "_")),
            report,
            files: Vec::new(),
            summary: None,
            failure: None,
        })
    }

    pub fn add_file(&mut self, name: &str, bytes: Vec<u8>) {
        self.files.push((name.to_string(), bytes));
    }

    pub fn write_report<W: Write>(&self, mut out: W) -> Result<(), CliError> {
        out.write_all(&self.report).map_err(spreadlab_core::LabError::from)?;
        Ok(())
    }

    pub fn write_to(&self, dir: &Path) -> Result<(), CliError> {
        fs::create_dir_all(dir).map_err(spreadlab_core::LabError::from)?;
        fs::write(dir.join(&self.name), &self.report).map_err(spreadlab_core::LabError::from)?;
        for (name, bytes) in &self.files {
            fs::write(dir.join(name), bytes).map_err(spreadlab_core::LabError::from)?;
        }
        Ok(())
    }
}
