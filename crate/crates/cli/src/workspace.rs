//! On-disk cache of invariant bases and differential matrices.
//!
//! Every artifact is written to a temporary file and renamed into place, then
//! recorded in `manifest.json` together with its SHA-256 digest and the
//! producing version. Reads check the digest.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use gkf_core::coboundary::{Checkpoint, CoboundaryError};
use gkf_core::complex::{basis_from_text, basis_to_text, CochainVector};
use gkf_core::{SparseMatrix, TypeSignature};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const PRODUCER: &str = concat!("gkf ", env!("CARGO_PKG_VERSION"));
const MANIFEST: &str = "manifest.json";
const SCHEMA: &str = "gkf-workspace/1";

#[derive(Debug, Error)]
pub enum WorkspaceError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("manifest {0}: {1}")]
    Manifest(PathBuf, String),
    #[error("digest mismatch for {key} ({file})")]
    DigestMismatch { key: String, file: String },
    #[error("cannot parse cached {key}: {reason}")]
    Corrupt { key: String, reason: String },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> WorkspaceError + '_ {
    move |source| WorkspaceError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub file: String,
    pub sha256: String,
    pub producer: String,
}

#[derive(Serialize, Deserialize)]
struct ManifestFile {
    schema: String,
    entries: BTreeMap<String, ManifestEntry>,
}

pub fn sha256_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

pub struct WorkspaceManifest {
    root: PathBuf,
    entries: Mutex<BTreeMap<String, ManifestEntry>>,
    tmp_counter: AtomicU64,
}

pub fn basis_key(w: u32, m: u32, t: &TypeSignature) -> String {
    let ty = t.to_string().replace(' ', "_");
    format!("basis/w{w:02}/m{m:02}/{ty}")
}

pub fn matrix_key(w: u32, m: u32) -> String {
    format!("matrix/w{w:02}/m{m:02}")
}

impl WorkspaceManifest {
    /// Opens (creating if needed) the workspace rooted at `root`.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, WorkspaceError> {
        let root = root.into();
        fs::create_dir_all(&root).map_err(io_err(&root))?;
        let path = root.join(MANIFEST);
        let entries = if path.exists() {
            let text = fs::read_to_string(&path).map_err(io_err(&path))?;
            let file: ManifestFile = serde_json::from_str(&text)
                .map_err(|e| WorkspaceError::Manifest(path.clone(), e.to_string()))?;
            if file.schema != SCHEMA {
                return Err(WorkspaceError::Manifest(
                    path,
                    format!("unknown schema {}", file.schema),
                ));
            }
            file.entries
        } else {
            BTreeMap::new()
        };
        Ok(WorkspaceManifest {
            root,
            entries: Mutex::new(entries),
            tmp_counter: AtomicU64::new(0),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn entries(&self) -> BTreeMap<String, ManifestEntry> {
        self.entries.lock().expect("manifest lock").clone()
    }

    fn write_atomic(&self, path: &Path, data: &[u8]) -> Result<(), WorkspaceError> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(io_err(dir))?;
        }
        let n = self.tmp_counter.fetch_add(1, Ordering::Relaxed);
        let tmp = path.with_extension(format!("tmp.{}.{n}", std::process::id()));
        let mut f = fs::File::create(&tmp).map_err(io_err(&tmp))?;
        f.write_all(data).map_err(io_err(&tmp))?;
        f.sync_all().map_err(io_err(&tmp))?;
        fs::rename(&tmp, path).map_err(io_err(path))
    }

    fn save_manifest(
        &self,
        entries: &BTreeMap<String, ManifestEntry>,
    ) -> Result<(), WorkspaceError> {
        let file = ManifestFile {
            schema: SCHEMA.to_string(),
            entries: entries.clone(),
        };
        let text = serde_json::to_string_pretty(&file).expect("manifest serializes");
        self.write_atomic(&self.root.join(MANIFEST), text.as_bytes())
    }

    /// Stores `content` under `key`, replacing any previous version.
    pub fn put(&self, key: &str, content: &str) -> Result<(), WorkspaceError> {
        let file = format!("{key}.txt");
        self.write_atomic(&self.root.join(&file), content.as_bytes())?;
        let entry = ManifestEntry {
            file,
            sha256: sha256_hex(content.as_bytes()),
            producer: PRODUCER.to_string(),
        };
        let mut entries = self.entries.lock().expect("manifest lock");
        entries.insert(key.to_string(), entry);
        self.save_manifest(&entries)
    }

    /// Content stored under `key`. Entries written by another version count as
    /// missing; a digest mismatch is an error.
    pub fn get(&self, key: &str) -> Result<Option<String>, WorkspaceError> {
        let entry = match self.entries.lock().expect("manifest lock").get(key) {
            Some(e) if e.producer == PRODUCER => e.clone(),
            _ => return Ok(None),
        };
        let path = self.root.join(&entry.file);
        let data = match fs::read(&path) {
            Ok(d) => d,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(WorkspaceError::DigestMismatch {
                    key: key.to_string(),
                    file: entry.file,
                })
            }
            Err(e) => return Err(io_err(&path)(e)),
        };
        if sha256_hex(&data) != entry.sha256 {
            return Err(WorkspaceError::DigestMismatch {
                key: key.to_string(),
                file: entry.file,
            });
        }
        String::from_utf8(data)
            .map(Some)
            .map_err(|e| WorkspaceError::Corrupt {
                key: key.to_string(),
                reason: e.to_string(),
            })
    }

    /// Checks the digest of every recorded artifact.
    pub fn verify(&self) -> Vec<(String, Result<(), WorkspaceError>)> {
        self.entries()
            .into_keys()
            .map(|key| {
                let r = self.get(&key).map(|_| ());
                (key, r)
            })
            .collect()
    }
}

fn store_err(e: WorkspaceError) -> CoboundaryError {
    CoboundaryError::Store(e.to_string())
}

impl Checkpoint for WorkspaceManifest {
    fn load_basis(
        &self,
        w: u32,
        m: u32,
        t: &TypeSignature,
    ) -> Result<Option<Vec<CochainVector>>, CoboundaryError> {
        let key = basis_key(w, m, t);
        match self.get(&key).map_err(store_err)? {
            None => Ok(None),
            Some(text) => basis_from_text(&text).map(Some).map_err(|e| {
                store_err(WorkspaceError::Corrupt {
                    key,
                    reason: e.to_string(),
                })
            }),
        }
    }

    fn store_basis(
        &self,
        w: u32,
        m: u32,
        t: &TypeSignature,
        basis: &[CochainVector],
    ) -> Result<(), CoboundaryError> {
        self.put(&basis_key(w, m, t), &basis_to_text(basis))
            .map_err(store_err)
    }

    fn load_matrix(&self, w: u32, m: u32) -> Result<Option<SparseMatrix>, CoboundaryError> {
        let key = matrix_key(w, m);
        match self.get(&key).map_err(store_err)? {
            None => Ok(None),
            Some(text) => SparseMatrix::from_text(&text).map(Some).map_err(|e| {
                store_err(WorkspaceError::Corrupt {
                    key,
                    reason: e.to_string(),
                })
            }),
        }
    }

    fn store_matrix(&self, w: u32, m: u32, matrix: &SparseMatrix) -> Result<(), CoboundaryError> {
        self.put(&matrix_key(w, m), &matrix.to_text())
            .map_err(store_err)
    }
}
