//! Checkpointed scans over a coefficient box.
//!
//! Output is append-only NDJSON. After every chunk the checkpoint records the
//! last key processed and the output length at that moment, so a resumed run
//! truncates any partial tail and continues right after that key.

use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use g2rank_core::models::ModelKey;
use g2rank_core::{BoxSpec, WeierstrassModel};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::failure::{CliError, CliResult};

const CHUNK: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub job: String,
    #[serde(rename = "box")]
    pub spec: BoxSpec,
    pub last_key: Option<ModelKey>,
    pub examined: u64,
    pub emitted: u64,
    pub offset: u64,
    pub done: bool,
}

impl Checkpoint {
    fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("corrupt checkpoint {}: {e}", path.display())))
    }

    fn store(&self, path: &Path) -> CliResult<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string(self).expect("checkpoint serializes"))
            .map_err(|e| CliError::io(&tmp, e))?;
        std::fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
    }
}

pub struct ScanJob<'a> {
    pub name: &'a str,
    pub spec: BoxSpec,
    pub out: PathBuf,
    pub checkpoint: PathBuf,
    pub resume: bool,
    /// Stop after this many models in this run.
    pub limit: Option<u64>,
}

pub fn default_checkpoint(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".ckpt");
    PathBuf::from(name)
}

/// Runs `record` on every valid model of the box, in key order, writing the
/// lines it returns. Returns the checkpoint after this run.
pub fn run_scan<F>(job: &ScanJob, record: F) -> CliResult<Checkpoint>
where
    F: Fn(&ModelKey, &WeierstrassModel) -> Option<String> + Sync,
{
    let (mut ckpt, file) = open(job)?;
    if ckpt.done {
        return Ok(ckpt);
    }
    let mut out = BufWriter::new(file);
    let mut models = job.spec.enumerate_from(ckpt.last_key);
    let mut budget = job.limit.unwrap_or(u64::MAX);
    while budget > 0 {
        let take = (budget.min(CHUNK as u64)) as usize;
        let chunk: Vec<(ModelKey, WeierstrassModel)> = models.by_ref().take(take).collect();
        if chunk.is_empty() {
            ckpt.done = true;
            break;
        }
        let lines: Vec<Option<String>> = chunk.par_iter().map(|(k, m)| record(k, m)).collect();
        for line in lines.iter().flatten() {
            writeln!(out, "{line}")?;
            ckpt.emitted += 1;
        }
        out.flush()?;
        ckpt.offset = out.get_ref().metadata()?.len();
        ckpt.examined += chunk.len() as u64;
        ckpt.last_key = chunk.last().map(|(k, _)| *k);
        budget -= chunk.len() as u64;
        if chunk.len() < take {
            ckpt.done = true;
        }
        ckpt.store(&job.checkpoint)?;
    }
    if !ckpt.done && models.next().is_none() {
        ckpt.done = true;
    }
    ckpt.store(&job.checkpoint)?;
    Ok(ckpt)
}

fn open(job: &ScanJob) -> CliResult<(Checkpoint, File)> {
    if job.resume && job.checkpoint.exists() {
        let ckpt = Checkpoint::load(&job.checkpoint)?;
        if ckpt.job != job.name || ckpt.spec != job.spec {
            return Err(CliError::Input(format!(
                "checkpoint {} belongs to a different job ({} over {:?})",
                job.checkpoint.display(),
                ckpt.job,
                ckpt.spec
            )));
        }
        let mut file = OpenOptions::new().read(true).write(true).open(&job.out).map_err(|e| CliError::io(&job.out, e))?;
        let len = file.metadata()?.len();
        if len < ckpt.offset {
            return Err(CliError::Input(format!(
                "corrupt checkpoint {}: output has {len} bytes, checkpoint expects {}",
                job.checkpoint.display(),
                ckpt.offset
            )));
        }
        file.set_len(ckpt.offset)?;
        file.seek(SeekFrom::End(0))?;
        return Ok((ckpt, file));
    }
    let file = File::create(&job.out).map_err(|e| CliError::io(&job.out, e))?;
    let ckpt = Checkpoint {
        job: job.name.to_string(),
        spec: job.spec.clone(),
        last_key: None,
        examined: 0,
        emitted: 0,
        offset: 0,
        done: false,
    };
    Ok((ckpt, file))
}

#[cfg(test)]
mod tests {
    use super::*;
    use g2rank_core::BoxKind;

    fn job(dir: &Path, resume: bool, limit: Option<u64>) -> ScanJob<'static> {
        let out = dir.join("models.ndjson");
        ScanJob {
            name: "enumerate",
            spec: BoxSpec::slice(BoxKind::S1, 1, 0).unwrap(),
            checkpoint: default_checkpoint(&out),
            out,
            resume,
            limit,
        }
    }

    fn key_line(k: &ModelKey, _: &WeierstrassModel) -> Option<String> {
        Some(serde_json::to_string(k).unwrap())
    }

    #[test]
    fn interrupted_runs_match_a_single_run() {
        let full_dir = tempfile::tempdir().unwrap();
        let full = run_scan(&job(full_dir.path(), false, None), key_line).unwrap();
        assert!(full.done);
        let want = std::fs::read_to_string(full_dir.path().join("models.ndjson")).unwrap();

        let dir = tempfile::tempdir().unwrap();
        let mut ckpt = run_scan(&job(dir.path(), true, Some(700)), key_line).unwrap();
        let mut rounds = 1;
        while !ckpt.done {
            ckpt = run_scan(&job(dir.path(), true, Some(700)), key_line).unwrap();
            rounds += 1;
        }
        assert!(rounds > 2);
        // Resuming a finished job changes nothing.
        let again = run_scan(&job(dir.path(), true, Some(700)), key_line).unwrap();
        assert_eq!(again, ckpt);
        let got = std::fs::read_to_string(dir.path().join("models.ndjson")).unwrap();
        assert_eq!(got, want);
        assert_eq!(ckpt.emitted, full.emitted);
    }

    #[test]
    fn partial_tail_is_discarded_on_resume() {
        let dir = tempfile::tempdir().unwrap();
        run_scan(&job(dir.path(), true, Some(100)), key_line).unwrap();
        let out = dir.path().join("models.ndjson");
        let mut f = OpenOptions::new().append(true).open(&out).unwrap();
        writeln!(f, "{{\"torn\":").unwrap();
        let ckpt = run_scan(&job(dir.path(), true, None), key_line).unwrap();
        let text = std::fs::read_to_string(&out).unwrap();
        assert!(!text.contains("torn"));
        assert_eq!(text.lines().count() as u64, ckpt.emitted);
    }

    #[test]
    fn corrupt_checkpoints_are_refused() {
        let dir = tempfile::tempdir().unwrap();
        let j = job(dir.path(), true, Some(10));
        run_scan(&j, key_line).unwrap();
        std::fs::write(&j.checkpoint, "{not json").unwrap();
        let err = run_scan(&j, key_line).unwrap_err();
        assert!(err.to_string().contains("corrupt checkpoint"));

        run_scan(&job(dir.path(), false, Some(10)), key_line).unwrap();
        std::fs::write(&j.out, "").unwrap();
        assert!(run_scan(&j, key_line).unwrap_err().to_string().contains("corrupt checkpoint"));
    }
}
