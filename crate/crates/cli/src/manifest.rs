//! Run manifests: the resolved configuration plus content hashes of every
//! output file. The manifest is itself a valid config file, so
//! `eqlab train --config manifest.txt` repeats the run.

use crate::config::TrainConfig;
use anyhow::Result;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

pub const MANIFEST: &str = "manifest.txt";
pub const RUN_LOG: &str = "run.log";

/// Git-style object hash (`blob <len>\0<bytes>`, SHA-256 object format).
pub fn blob_hash(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", bytes.len()).as_bytes());
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn files_under(root: &Path, dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            files_under(root, &path, out)?;
        } else {
            out.push(path.strip_prefix(root)?.to_path_buf());
        }
    }
    Ok(())
}

/// Relative paths and hashes of everything in `dir` except the log and
/// the manifest, sorted by path.
pub fn output_hashes(dir: &Path) -> Result<Vec<(String, String)>> {
    let mut files = Vec::new();
    files_under(dir, dir, &mut files)?;
    let mut hashes = files
        .into_iter()
        .filter(|p| p != Path::new(MANIFEST) && p != Path::new(RUN_LOG))
        .map(|p| {
            let hash = blob_hash(&fs::read(dir.join(&p))?);
            let name = p.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/");
            Ok((name, hash))
        })
        .collect::<Result<Vec<_>>>()?;
    hashes.sort();
    Ok(hashes)
}

pub fn write_manifest(dir: &Path, config: &TrainConfig) -> Result<()> {
    let mut text = format!("# eqlab {} run manifest\n", env!("CARGO_PKG_VERSION"));
    text.push_str(&config.to_text());
    for (name, hash) in output_hashes(dir)? {
        text.push_str(&format!("# output sha256:{hash} {name}\n"));
    }
    fs::write(dir.join(MANIFEST), text)?;
    Ok(())
}
