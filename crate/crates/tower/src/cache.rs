//! Persistent memo of stage axiom summaries.
//!
//! A cache file lives at `<dir>/<key>.json`, where the key is a SHA-256 over
//! the coding version, the notation system and the sign policy. The file
//! carries a format version and a checksum over its entries. Files with a
//! different version, key or checksum are refused, never repaired or
//! silently ignored. Writes go to a temporary file that is then renamed
//! over the old one.
//!
//! ```text
//! { "format": "tower-memo", "version": 1, "coding_version": 1,
//!   "notation": "cnf-below-epsilon0", "policy": "w=neg",
//!   "key": "<hex>", "checksum": "<hex>",
//!   "entries": [ { "code": 0, "notation": "0", "len": 46954513, "digest": "<hex>" }, .. ] }
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use ordinals::{parse_ordinal, Ordinal};
use serde::{Deserialize, Serialize};
use sha2::{Digest as _, Sha256};
use thiserror::Error;

use crate::policy::SignPolicy;
use crate::stage::Entry;

pub const CACHE_FORMAT_VERSION: u32 = 1;
const FORMAT: &str = "tower-memo";
/// Identifies the notation system whose codes index the memo.
pub const NOTATION_SYSTEM: &str = "cnf-below-epsilon0";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache i/o on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("cache file {0} is not a valid memo file")]
    Malformed(PathBuf),
    #[error("cache file {path} has version {found}, expected {expected}")]
    Version { path: PathBuf, found: String, expected: String },
    #[error("cache file {0} failed its integrity check")]
    Integrity(PathBuf),
}

#[derive(Serialize, Deserialize)]
struct FileEntry {
    code: u64,
    notation: String,
    len: usize,
    digest: String,
}

#[derive(Serialize, Deserialize)]
struct File {
    format: String,
    version: u32,
    coding_version: u32,
    notation: String,
    policy: String,
    key: String,
    checksum: String,
    entries: Vec<FileEntry>,
}

/// Content address of a memo: which coding, notation system and policy
/// produced it.
pub fn cache_key(policy: &SignPolicy) -> String {
    let mut h = Sha256::new();
    h.update(format!("coding={};notation={};policy={}", coding::CODING_VERSION, NOTATION_SYSTEM, policy.canonical_text()));
    hex::encode(h.finalize())
}

pub fn cache_path(dir: &Path, policy: &SignPolicy) -> PathBuf {
    dir.join(format!("{}.json", cache_key(policy)))
}

fn checksum(entries: &[FileEntry]) -> String {
    let mut h = Sha256::new();
    for e in entries {
        h.update(format!("{}|{}|{}|{}\n", e.code, e.notation, e.len, e.digest));
    }
    hex::encode(h.finalize())
}

/// Loads the memo for `policy` from `dir`; `None` when no file exists yet.
pub fn load(dir: &Path, policy: &SignPolicy) -> Result<Option<BTreeMap<u64, Entry>>, CacheError> {
    let path = cache_path(dir, policy);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
        Err(source) => return Err(CacheError::Io { path, source }),
    };
    let file: File = serde_json::from_str(&text).map_err(|_| CacheError::Malformed(path.clone()))?;
    if file.format != FORMAT || file.version != CACHE_FORMAT_VERSION || file.coding_version != coding::CODING_VERSION {
        return Err(CacheError::Version {
            path,
            found: format!("{} v{} coding v{}", file.format, file.version, file.coding_version),
            expected: format!("{FORMAT} v{CACHE_FORMAT_VERSION} coding v{}", coding::CODING_VERSION),
        });
    }
    let consistent = file.notation == NOTATION_SYSTEM
        && file.policy == policy.canonical_text()
        && file.key == cache_key(policy)
        && file.checksum == checksum(&file.entries);
    if !consistent {
        return Err(CacheError::Integrity(path));
    }
    let mut out = BTreeMap::new();
    for e in file.entries {
        let notation = parse_ordinal(&e.notation).map_err(|_| CacheError::Integrity(path.clone()))?;
        let digest: [u8; 32] = hex::decode(&e.digest)
            .ok()
            .and_then(|d| d.try_into().ok())
            .ok_or_else(|| CacheError::Integrity(path.clone()))?;
        if u64::try_from(&notation.code()).ok() != Some(e.code) {
            return Err(CacheError::Integrity(path));
        }
        out.insert(e.code, Entry { notation, len: e.len, digest });
    }
    // the memo is filled in code order, so it holds every canonical code up to its last
    let top = out.keys().next_back().copied().unwrap_or(0);
    let canonical = (0..=top).filter(|&g| Ordinal::from_code(&g.into()).is_some());
    if !out.is_empty() && !canonical.eq(out.keys().copied()) {
        return Err(CacheError::Integrity(path));
    }
    Ok(Some(out))
}

/// Writes the memo for `policy` into `dir`, replacing any previous file.
pub fn store(dir: &Path, policy: &SignPolicy, memo: &BTreeMap<u64, Entry>) -> Result<PathBuf, CacheError> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CacheError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let entries: Vec<FileEntry> = memo
        .iter()
        .map(|(&code, e)| FileEntry { code, notation: e.notation.to_string(), len: e.len, digest: hex::encode(e.digest) })
        .collect();
    let file = File {
        format: FORMAT.into(),
        version: CACHE_FORMAT_VERSION,
        coding_version: coding::CODING_VERSION,
        notation: NOTATION_SYSTEM.into(),
        policy: policy.canonical_text(),
        key: cache_key(policy),
        checksum: checksum(&entries),
        entries,
    };
    let path = cache_path(dir, policy);
    let tmp = path.with_extension("json.tmp");
    let text = serde_json::to_string_pretty(&file).expect("memo serializes");
    fs::write(&tmp, text).map_err(io_err(&tmp))?;
    fs::rename(&tmp, &path).map_err(io_err(&path))?;
    Ok(path)
}
