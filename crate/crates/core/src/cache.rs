//! On-disk cache of computed character series.
//!
//! One file per (weight, method, cutoff), holding the canonical series JSON
//! plus a SHA-256 digest of it. A load checks the digest before trusting
//! anything; a cached series with a larger cutoff satisfies a smaller
//! request by truncation.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use sha2::{Digest, Sha256};

use crate::admissible::Weight;
use crate::error::{Error, Result};
use crate::series::TriGradedSeries;
use crate::verify::Method;

// The series payload is embedded verbatim (RawValue), so the digest covers
// exactly the bytes that were canonically serialized at store time.
#[derive(Serialize, Deserialize)]
struct CacheEnvelope {
    weight: Vec<u32>,
    method: String,
    cutoff: u32,
    series: Box<RawValue>,
    digest: String,
}

fn hex_digest(payload: &str) -> String {
    let hash = Sha256::digest(payload.as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

fn file_name(w: &Weight, method: Method, cutoff: u32) -> String {
    let weight_tag: Vec<String> = w.components().iter().map(|k| k.to_string()).collect();
    format!(
        "w{}.{}.D{}.json",
        weight_tag.join("-"),
        method.name(),
        cutoff
    )
}

/// Writes the series to `dir`, returning the file path.
pub fn cache_store(
    dir: &Path,
    w: &Weight,
    method: Method,
    series: &TriGradedSeries,
) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let payload = series.to_json();
    let envelope = CacheEnvelope {
        weight: w.components().to_vec(),
        method: method.name().to_string(),
        cutoff: series.cutoff(),
        digest: hex_digest(&payload),
        series: RawValue::from_string(payload).expect("series JSON is valid"),
    };
    let path = dir.join(file_name(w, method, series.cutoff()));
    fs::write(
        &path,
        serde_json::to_string(&envelope).expect("envelope serializes"),
    )?;
    Ok(path)
}

/// Loads a cached series for the key, accepting any stored cutoff >= the
/// requested one (the result is truncated down to the request).
///
/// Fails with `CacheMiss` when no sufficient entry exists and `CacheCorrupt`
/// when an entry exists but its digest or shape does not check out.
pub fn cache_load(dir: &Path, w: &Weight, method: Method, cutoff: u32) -> Result<TriGradedSeries> {
    let key = format!("weight ({w}), method {method}, cutoff {cutoff}");
    let Ok(entries) = fs::read_dir(dir) else {
        return Err(Error::CacheMiss(key));
    };

    // Candidate files for this weight and method, by stored cutoff.
    let prefix = {
        let tag: Vec<String> = w.components().iter().map(|k| k.to_string()).collect();
        format!("w{}.{}.D", tag.join("-"), method.name())
    };
    let mut candidates: Vec<(u32, PathBuf)> = Vec::new();
    for entry in entries.flatten() {
        let name = entry.file_name().to_string_lossy().into_owned();
        if let Some(rest) = name
            .strip_prefix(&prefix)
            .and_then(|r| r.strip_suffix(".json"))
        {
            if let Ok(stored) = rest.parse::<u32>() {
                if stored >= cutoff {
                    candidates.push((stored, entry.path()));
                }
            }
        }
    }
    // Prefer the smallest sufficient cutoff.
    candidates.sort();
    let Some((_, path)) = candidates.into_iter().next() else {
        return Err(Error::CacheMiss(key));
    };

    let corrupt = |reason: &str| Error::CacheCorrupt {
        path: path.display().to_string(),
        reason: reason.to_string(),
    };
    let text = fs::read_to_string(&path)?;
    let envelope: CacheEnvelope =
        serde_json::from_str(&text).map_err(|e| corrupt(&format!("bad envelope: {e}")))?;
    let payload = envelope.series.get();
    if hex_digest(payload) != envelope.digest {
        return Err(corrupt("digest mismatch"));
    }
    if envelope.weight != w.components() || envelope.method != method.name() {
        return Err(corrupt("key fields do not match the file name"));
    }
    let series = TriGradedSeries::from_json(payload)
        .map_err(|e| corrupt(&format!("bad series payload: {e}")))?;
    if series.cutoff() < cutoff {
        return Err(corrupt("stored cutoff below the advertised one"));
    }
    Ok(series.truncate(cutoff))
}
