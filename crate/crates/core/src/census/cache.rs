//! Append-only census cache: one header line, then per chunk a run of
//! record lines followed by a commit marker. Chunks without a commit marker
//! are recomputed on resume; committed lines must re-serialize bit-exactly.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

/// Header carried by every cache file; a resume must match it exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheHeader {
    pub census: String,
    pub version: String,
    pub n: u32,
    pub a_min: u64,
    pub b_min: u64,
    pub delta0: f64,
    pub quadrant: String,
    pub bad_threshold: u64,
    pub prime_budget: u32,
    pub exact_fallback: bool,
    pub chunk_size: u64,
}

/// One classified pair, in the exact field order written to disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub a: i64,
    pub b: i64,
    /// Decimal string: discriminants overflow 64 bits routinely.
    pub disc: String,
    /// None (JSON null) exactly when disc = 0.
    pub squarefree: Option<bool>,
    /// "irreducible" | "reducible" | "unresolved".
    pub verdict: String,
    /// Prime as decimal, "exhaustive-search", "factor:<coeffs>", or "tried:<k>".
    pub certificate: String,
    pub osada: bool,
    pub bad: bool,
    pub member: bool,
}

/// Commit marker closing a chunk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChunkMarker {
    pub chunk: u32,
    pub a_lo: i64,
    pub a_hi: i64,
    pub records: u64,
}

/// Committed chunks recovered from an existing cache file.
pub struct ResumeState {
    pub chunks: Vec<(ChunkMarker, Vec<CacheRecord>)>,
    /// Byte offset just past the last commit marker; anything after is an
    /// uncommitted tail and gets truncated before new appends.
    pub committed_len: u64,
}

pub struct CensusCache {
    path: PathBuf,
    file: File,
}

impl CensusCache {
    /// Creates a fresh cache with the given header (truncating anything old).
    pub fn create(path: &Path, header: &CacheHeader) -> Result<Self> {
        let mut file = OpenOptions::new()
            .create(true)
            .write(true)
            .truncate(true)
            .open(path)?;
        writeln!(file, "{}", serde_json::to_string(header).expect("header json"))?;
        file.sync_data()?;
        Ok(CensusCache { path: path.to_path_buf(), file })
    }

    /// Opens an existing cache, validates the header and every committed
    /// record (bit-exact re-serialization), and truncates any uncommitted
    /// tail. Returns the recovered chunks alongside the writable cache.
    pub fn resume(path: &Path, header: &CacheHeader) -> Result<(Self, ResumeState)> {
        let reader = BufReader::new(File::open(path)?);
        let mut lines = reader.lines();
        let first = lines
            .next()
            .ok_or_else(|| Error::CacheCorrupt("empty cache file".into()))??;
        let found: CacheHeader = serde_json::from_str(&first)
            .map_err(|e| Error::CacheCorrupt(format!("bad header: {e}")))?;
        if &found != header {
            return Err(Error::CacheMismatch(format!(
                "cache header does not match this run\n  cache: {first}\n  run:   {}",
                serde_json::to_string(header).expect("header json")
            )));
        }

        let mut offset = first.len() as u64 + 1;
        let mut committed_len = offset;
        let mut chunks = Vec::new();
        let mut pending: Vec<CacheRecord> = Vec::new();
        let mut expected_chunk = 0u32;
        for line in lines {
            let line = line?;
            let line_len = line.len() as u64 + 1;
            if line.starts_with("{\"chunk\":") {
                let marker: ChunkMarker = match serde_json::from_str(&line) {
                    Ok(m) => m,
                    Err(_) => break, // torn marker: treat as uncommitted tail
                };
                if serde_json::to_string(&marker).expect("marker json") != line {
                    return Err(Error::CacheCorrupt(format!(
                        "chunk marker fails bit-exact revalidation: {line}"
                    )));
                }
                if marker.chunk != expected_chunk || marker.records != pending.len() as u64 {
                    return Err(Error::CacheCorrupt(format!(
                        "chunk marker out of sequence: {line} (expected chunk {expected_chunk} with {} records)",
                        pending.len()
                    )));
                }
                expected_chunk += 1;
                offset += line_len;
                committed_len = offset;
                chunks.push((marker, std::mem::take(&mut pending)));
            } else {
                let record: CacheRecord = match serde_json::from_str(&line) {
                    Ok(r) => r,
                    Err(_) => break, // torn record line
                };
                if serde_json::to_string(&record).expect("record json") != line {
                    return Err(Error::CacheCorrupt(format!(
                        "record fails bit-exact revalidation: {line}"
                    )));
                }
                offset += line_len;
                pending.push(record);
            }
        }

        let file = OpenOptions::new().write(true).open(path)?;
        file.set_len(committed_len)?;
        let mut file = file;
        file.seek(SeekFrom::End(0))?;
        Ok((
            CensusCache { path: path.to_path_buf(), file },
            ResumeState { chunks, committed_len },
        ))
    }

    /// Appends a chunk's records and its commit marker.
    pub fn commit_chunk(&mut self, marker: &ChunkMarker, records: &[CacheRecord]) -> Result<()> {
        let mut buf = String::new();
        for r in records {
            buf.push_str(&serde_json::to_string(r).expect("record json"));
            buf.push('\n');
        }
        buf.push_str(&serde_json::to_string(marker).expect("marker json"));
        buf.push('\n');
        self.file.write_all(buf.as_bytes())?;
        self.file.sync_data()?;
        Ok(())
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header() -> CacheHeader {
        CacheHeader {
            census: "trinodisc".into(),
            version: "test".into(),
            n: 5,
            a_min: 1,
            b_min: 1,
            delta0: 0.5,
            quadrant: "both-signs".into(),
            bad_threshold: 1,
            prime_budget: 8,
            exact_fallback: true,
            chunk_size: 16,
        }
    }

    fn record(a: i64, b: i64) -> CacheRecord {
        CacheRecord {
            a,
            b,
            disc: "3381".into(),
            squarefree: Some(false),
            verdict: "reducible".into(),
            certificate: "factor:1,1,1".into(),
            osada: true,
            bad: false,
            member: false,
        }
    }

    #[test]
    fn roundtrip_and_resume() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("census.cache");
        let h = header();
        let marker = ChunkMarker { chunk: 0, a_lo: -2, a_hi: -1, records: 2 };
        {
            let mut cache = CensusCache::create(&path, &h).unwrap();
            cache.commit_chunk(&marker, &[record(-2, 1), record(-1, 1)]).unwrap();
        }
        let (_cache, state) = CensusCache::resume(&path, &h).unwrap();
        assert_eq!(state.chunks.len(), 1);
        assert_eq!(state.chunks[0].0, marker);
        assert_eq!(state.chunks[0].1.len(), 2);
    }

    #[test]
    fn truncates_uncommitted_tail() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("census.cache");
        let h = header();
        {
            let mut cache = CensusCache::create(&path, &h).unwrap();
            cache
                .commit_chunk(
                    &ChunkMarker { chunk: 0, a_lo: -2, a_hi: -1, records: 1 },
                    &[record(-2, 1)],
                )
                .unwrap();
            // a torn write: half a record line, no commit marker
            use std::io::Write;
            let mut f = OpenOptions::new().append(true).open(&path).unwrap();
            write!(f, "{{\"a\":1,\"b\":1,\"dis").unwrap();
        }
        let before = std::fs::metadata(&path).unwrap().len();
        let (_cache, state) = CensusCache::resume(&path, &h).unwrap();
        assert_eq!(state.chunks.len(), 1);
        assert!(state.committed_len < before);
        assert_eq!(std::fs::metadata(&path).unwrap().len(), state.committed_len);
    }

    #[test]
    fn rejects_mismatched_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("census.cache");
        CensusCache::create(&path, &header()).unwrap();
        let mut other = header();
        other.b_min = 2;
        assert!(matches!(
            CensusCache::resume(&path, &other),
            Err(Error::CacheMismatch(_))
        ));
    }

    #[test]
    fn rejects_tampered_record() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("census.cache");
        let h = header();
        {
            let mut cache = CensusCache::create(&path, &h).unwrap();
            cache
                .commit_chunk(
                    &ChunkMarker { chunk: 0, a_lo: -2, a_hi: -1, records: 1 },
                    &[record(-2, 1)],
                )
                .unwrap();
        }
        // re-order two JSON keys: parses fine but fails bit-exact check
        let contents = std::fs::read_to_string(&path).unwrap();
        let tampered = contents.replace("\"a\":-2,\"b\":1", "\"b\":1,\"a\":-2");
        assert_ne!(contents, tampered);
        std::fs::write(&path, tampered).unwrap();
        assert!(matches!(
            CensusCache::resume(&path, &h),
            Err(Error::CacheCorrupt(_))
        ));
    }
}
