//! The on-disk parallelism certificate and its from-scratch verifier.
//!
//! A file is canonical pretty-printed JSON:
//!
//! ```text
//! {
//!   "schema_version": "1",
//!   "tower": { "p": "2", "e": "1", "k": "2", "n": "4", "modulus": ["1", "1", "0", "0", "1"] },
//!   "spreads": [ [ [[1, 0, 0, 0], [0, 1, 0, 0]], ... ], ... ],
//!   "generators": [ [[...], ...], ... ],
//!   "manifest": "out.json.manifest.json",
//!   "digest": "<sha-256 of the compact body without this field>"
//! }
//! ```
//!
//! Subspaces are lists of RREF rows; entries are canonical scalar indices.
//! `generators[i]` is a matrix carrying the Desarguesian spread onto
//! `spreads[i]`.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::field::{FieldTower, TowerDescriptor, DEFAULT_TABLE_CAP};
use crate::linalg::{Matrix, Subspace, SubspaceKey};
use crate::spread::{
    certify_parallelism, desarguesian_spread, spread_image, Ambient, ParallelismViolation, PartialParallelism, Spread,
};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerRecord {
    pub p: String,
    pub e: String,
    pub k: String,
    pub n: String,
    pub modulus: Vec<String>,
}

impl TowerRecord {
    pub fn of(d: &TowerDescriptor) -> Self {
        TowerRecord {
            p: d.p.to_string(),
            e: d.e.to_string(),
            k: d.k.to_string(),
            n: d.n.to_string(),
            modulus: d.modulus.iter().map(u64::to_string).collect(),
        }
    }

    pub fn descriptor(&self) -> Result<TowerDescriptor, CertificateViolation> {
        fn num<T: std::str::FromStr>(field: &str, s: &str) -> Result<T, CertificateViolation> {
            // only plain decimal digits; no signs, no leading zeros
            let canonical = !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) && (s == "0" || !s.starts_with('0'));
            canonical
                .then(|| s.parse().ok())
                .flatten()
                .ok_or_else(|| CertificateViolation::Schema(format!("tower.{field} = {s:?} is not a decimal integer")))
        }
        Ok(TowerDescriptor {
            p: num("p", &self.p)?,
            e: num("e", &self.e)?,
            k: num("k", &self.k)?,
            n: num("n", &self.n)?,
            modulus: self.modulus.iter().map(|c| num("modulus", c)).collect::<Result<_, _>>()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParallelismFile {
    pub schema_version: String,
    pub tower: TowerRecord,
    pub spreads: Vec<Vec<Vec<Vec<u8>>>>,
    pub generators: Vec<Vec<Vec<u8>>>,
    pub manifest: String,
    pub digest: String,
}

#[derive(Serialize)]
struct Body<'a> {
    schema_version: &'a str,
    tower: &'a TowerRecord,
    spreads: &'a [Vec<Vec<Vec<u8>>>],
    generators: &'a [Vec<Vec<u8>>],
    manifest: &'a str,
}

impl ParallelismFile {
    pub fn new(pp: &PartialParallelism, tower: &FieldTower, manifest: &str) -> Self {
        let mut file = ParallelismFile {
            schema_version: SCHEMA_VERSION.to_string(),
            tower: TowerRecord::of(&tower.descriptor()),
            spreads: pp
                .spreads
                .iter()
                .map(|s| s.members().iter().map(|u| u.basis().to_rows()).collect())
                .collect(),
            generators: pp.generators.iter().map(Matrix::to_rows).collect(),
            manifest: manifest.to_string(),
            digest: String::new(),
        };
        file.digest = file.compute_digest();
        file
    }

    pub fn compute_digest(&self) -> String {
        let body = Body {
            schema_version: &self.schema_version,
            tower: &self.tower,
            spreads: &self.spreads,
            generators: &self.generators,
            manifest: &self.manifest,
        };
        let bytes = serde_json::to_vec(&body).expect("body serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Canonical encoding: pretty JSON with a trailing newline.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("file serializes");
        out.push(b'\n');
        out
    }
}

/// Why a certificate was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateViolation {
    Parse(String),
    Schema(String),
    Tower(String),
    Rref { spread: usize, member: usize, reason: String },
    Spread(ParallelismViolation),
    Disjointness { first: usize, second: usize, key: SubspaceKey },
    Generator { index: usize, reason: String },
    Digest { expected: String, found: String },
    NonCanonical,
}

impl fmt::Display for CertificateViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CertificateViolation::*;
        match self {
            Parse(m) => write!(f, "parse error: {m}"),
            Schema(m) => write!(f, "schema violation: {m}"),
            Tower(m) => write!(f, "tower violation: {m}"),
            Rref { spread, member, reason } => {
                write!(f, "RREF violation in spread {spread}, member {member}: {reason}")
            }
            Spread(v) => write!(f, "spread violation: {v}"),
            Disjointness { first, second, key } => {
                write!(f, "disjointness violation: spreads {first} and {second} share subspace {key}")
            }
            Generator { index, reason } => write!(f, "generator violation at {index}: {reason}"),
            Digest { expected, found } => write!(f, "digest violation: computed {expected}, file has {found}"),
            NonCanonical => write!(f, "file is not in canonical encoding"),
        }
    }
}

impl std::error::Error for CertificateViolation {}

impl From<CertificateViolation> for Error {
    fn from(v: CertificateViolation) -> Self {
        Error::Certification(v.to_string())
    }
}

/// What a valid certificate contains.
#[derive(Clone, Debug)]
pub struct Certified {
    pub tower: FieldTower,
    pub parallelism: PartialParallelism,
}

impl Certified {
    pub fn ambient(&self) -> Ambient {
        self.parallelism.ambient
    }
}

fn matrix_of(rows: &[Vec<u8>], cols: usize, what: &str) -> Result<Matrix, String> {
    if rows.iter().any(|r| r.len() != cols) {
        return Err(format!("{what} rows must have length {cols}"));
    }
    Matrix::from_rows(rows).map_err(|e| e.to_string())
}

/// Re-validates a certificate from its bytes alone.
pub fn certify_bytes(bytes: &[u8]) -> Result<Certified, CertificateViolation> {
    use CertificateViolation as V;
    let file: ParallelismFile = serde_json::from_slice(bytes).map_err(|e| V::Parse(e.to_string()))?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(V::Schema(format!("unsupported schema_version {:?}", file.schema_version)));
    }
    let descriptor = file.tower.descriptor()?;
    let tower = FieldTower::from_descriptor(&descriptor, DEFAULT_TABLE_CAP).map_err(|e| V::Tower(e.to_string()))?;
    let f = tower.scalars();
    let ambient = Ambient::of(&tower);

    let mut members = Vec::with_capacity(file.spreads.len());
    for (si, s) in file.spreads.iter().enumerate() {
        let mut list = Vec::with_capacity(s.len());
        for (mi, rows) in s.iter().enumerate() {
            let rref = |reason: String| V::Rref { spread: si, member: mi, reason };
            if rows.len() != ambient.k {
                return Err(rref(format!("{} rows, expected {}", rows.len(), ambient.k)));
            }
            let m = matrix_of(rows, ambient.n, "subspace").map_err(rref)?;
            list.push(Subspace::from_rref(&m, f).map_err(|e| rref(e.to_string()))?);
        }
        members.push(list);
    }
    certify_parallelism(&members, ambient, f).map_err(|v| match v {
        ParallelismViolation::SharedSubspace { first, second, key } => V::Disjointness { first, second, key },
        other => V::Spread(other),
    })?;
    let spreads: Vec<Spread> =
        members.into_iter().map(|m| Spread::new(ambient, m, f).expect("certified above")).collect();

    if file.generators.len() != spreads.len() {
        return Err(V::Schema(format!("{} generators for {} spreads", file.generators.len(), spreads.len())));
    }
    let base = desarguesian_spread(&tower);
    let mut generators = Vec::with_capacity(spreads.len());
    for (i, rows) in file.generators.iter().enumerate() {
        let gen = |reason: String| V::Generator { index: i, reason };
        if rows.len() != ambient.n {
            return Err(gen(format!("{} rows, expected {}", rows.len(), ambient.n)));
        }
        let m = matrix_of(rows, ambient.n, "generator").map_err(gen)?;
        m.check_entries(f).map_err(|e| gen(e.to_string()))?;
        let image = spread_image(&m, &base, f).map_err(|e| gen(e.to_string()))?;
        if image != spreads[i] {
            return Err(gen("image of the base spread differs from the listed spread".into()));
        }
        generators.push(m);
    }

    let expected = file.compute_digest();
    if expected != file.digest {
        return Err(V::Digest { expected, found: file.digest });
    }
    if file.to_bytes() != bytes {
        return Err(V::NonCanonical);
    }
    Ok(Certified { tower, parallelism: PartialParallelism { ambient, spreads, generators } })
}
