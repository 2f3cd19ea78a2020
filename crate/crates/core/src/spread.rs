//! Spreads of `V(n, q)` and partial parallelisms.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldTower, ScalarField};
use crate::linalg::{encode_vector, intersection_dim, Matrix, Subspace, SubspaceKey};

/// Spreads are certified by vector cover counting up to this many vectors.
pub const COVER_COUNT_LIMIT: usize = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ambient {
    pub n: usize,
    pub k: usize,
    pub q: u64,
}

impl Ambient {
    pub fn of(tower: &FieldTower) -> Self {
        Ambient { n: tower.n(), k: tower.k(), q: tower.q() }
    }

    /// `(q^n − 1)/(q^k − 1)`.
    pub fn spread_size(&self) -> u64 {
        (self.q.pow(self.n as u32) - 1) / (self.q.pow(self.k as u32) - 1)
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V({},{}) with k = {}", self.n, self.q, self.k)
    }
}

/// Why a candidate set of subspaces is not a spread.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpreadViolation {
    MixedAmbient { index: usize, dim: usize, ambient_dim: usize },
    WrongSize { expected: u64, found: usize },
    Overlap { first: usize, second: usize },
    Uncovered { vector: Vec<u8> },
}

impl fmt::Display for SpreadViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpreadViolation::MixedAmbient { index, dim, ambient_dim } => {
                write!(f, "member {index} is a {dim}-subspace of F^{ambient_dim}")
            }
            SpreadViolation::WrongSize { expected, found } => {
                write!(f, "spread has {found} members, expected {expected}")
            }
            SpreadViolation::Overlap { first, second } => {
                write!(f, "members {first} and {second} intersect nontrivially")
            }
            SpreadViolation::Uncovered { vector } => write!(f, "vector {vector:?} is not covered"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertifyMethod {
    /// Cover counting for small spaces, pairwise intersections otherwise.
    Auto,
    Cover,
    Pairwise,
}

/// Checks that `members` is a `k`-spread of `V(n, q)`.
pub fn certify_spread(
    members: &[Subspace],
    ambient: Ambient,
    f: &ScalarField,
) -> Result<CertifyMethod, SpreadViolation> {
    certify_spread_with(members, ambient, f, CertifyMethod::Auto)
}

pub fn certify_spread_with(
    members: &[Subspace],
    ambient: Ambient,
    f: &ScalarField,
    method: CertifyMethod,
) -> Result<CertifyMethod, SpreadViolation> {
    if let Some((index, u)) = members
        .iter()
        .enumerate()
        .find(|(_, u)| u.dim() != ambient.k || u.ambient_dim() != ambient.n)
    {
        return Err(SpreadViolation::MixedAmbient {
            index,
            dim: u.dim(),
            ambient_dim: u.ambient_dim(),
        });
    }
    let expected = ambient.spread_size();
    if members.len() as u64 != expected {
        return Err(SpreadViolation::WrongSize { expected, found: members.len() });
    }
    let space = (ambient.q as usize).pow(ambient.n as u32);
    let method = match method {
        CertifyMethod::Auto if space <= COVER_COUNT_LIMIT => CertifyMethod::Cover,
        CertifyMethod::Auto => CertifyMethod::Pairwise,
        m => m,
    };
    match method {
        CertifyMethod::Cover => {
            let q = f.order();
            let mut owner = vec![usize::MAX; space];
            for (i, u) in members.iter().enumerate() {
                for v in u.vectors(f).iter().skip(1) {
                    let c = encode_vector(v, q);
                    if owner[c] != usize::MAX {
                        return Err(SpreadViolation::Overlap { first: owner[c], second: i });
                    }
                    owner[c] = i;
                }
            }
            if let Some(c) = (1..space).find(|&c| owner[c] == usize::MAX) {
                let mut vector = vec![0; ambient.n];
                crate::linalg::decode_vector(c, q, &mut vector);
                return Err(SpreadViolation::Uncovered { vector });
            }
        }
        _ => {
            for i in 0..members.len() {
                for j in i + 1..members.len() {
                    if intersection_dim(&members[i], &members[j], f).unwrap_or(1) != 0 {
                        return Err(SpreadViolation::Overlap { first: i, second: j });
                    }
                }
            }
        }
    }
    Ok(method)
}

/// A certified spread. Members keep their construction order; `keys` is
/// the sorted key array used for disjointness tests.
#[derive(Clone, Debug)]
pub struct Spread {
    ambient: Ambient,
    members: Vec<Subspace>,
    keys: Vec<SubspaceKey>,
}

impl PartialEq for Spread {
    /// Equality as sets of subspaces.
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.keys == other.keys
    }
}

impl Eq for Spread {}

impl Spread {
    /// Certifies `members` and wraps them.
    pub fn new(ambient: Ambient, members: Vec<Subspace>, f: &ScalarField) -> Result<Self> {
        certify_spread(&members, ambient, f).map_err(|v| Error::Certification(v.to_string()))?;
        Ok(Self::from_certified(ambient, members))
    }

    pub(crate) fn from_certified(ambient: Ambient, members: Vec<Subspace>) -> Self {
        let mut keys: Vec<SubspaceKey> = members.iter().map(Subspace::key).collect();
        keys.sort_unstable();
        Spread { ambient, members, keys }
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn keys(&self) -> &[SubspaceKey] {
        &self.keys
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, key: &SubspaceKey) -> bool {
        self.keys.binary_search(key).is_ok()
    }

    /// Number of subspaces shared with `other`.
    pub fn shared_members(&self, other: &Spread) -> usize {
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < self.keys.len() && j < other.keys.len() {
            match self.keys[i].cmp(&other.keys[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }
}

/// Matrix over `F_q` of the map `y ↦ x·y` on `F_{q^n}` in the basis `ω^j`.
pub fn multiplication_matrix(tower: &FieldTower, x: FieldElement) -> Matrix {
    let n = tower.n();
    let mut m = Matrix::zeros(n, n);
    for j in 0..n {
        let col = tower.coords_over_q(tower.mul(x, tower.omega_pow(j as u64)));
        for (i, c) in col.into_iter().enumerate() {
            m.set(i, j, c);
        }
    }
    m
}

/// `V_i = ω^i·F_{q^k}` for `i < N`, in index order.
pub fn desarguesian_spread(tower: &FieldTower) -> Spread {
    let ambient = Ambient::of(tower);
    let f = tower.scalars();
    let basis = tower.subfield_basis_qk();
    let members = (0..tower.spread_size())
        .map(|i| {
            let w = tower.omega_pow(i);
            let rows: Vec<Vec<u8>> =
                basis.iter().map(|&b| tower.coords_over_q(tower.mul(w, b))).collect();
            Subspace::span(&Matrix::from_rows(&rows).expect("rows have length n"), f)
        })
        .collect();
    let s = Spread::from_certified(ambient, members);
    debug_assert!(certify_spread(s.members(), ambient, f).is_ok());
    s
}

/// `{M(U) : U ∈ s}`; certified before it is returned.
pub fn spread_image(m: &Matrix, s: &Spread, f: &ScalarField) -> Result<Spread> {
    if m.rows() != s.ambient.n || !m.is_invertible(f) {
        return Err(Error::SingularMatrix);
    }
    let members = s.members.iter().map(|u| u.image_unchecked(m, f)).collect();
    Spread::new(s.ambient, members, f)
}

/// True iff the two spreads share no subspace.
pub fn spreads_disjoint(a: &Spread, b: &Spread) -> Result<bool> {
    if a.ambient != b.ambient {
        return Err(Error::MixedAmbient(format!("{} and {}", a.ambient, b.ambient)));
    }
    Ok(a.shared_members(b) == 0)
}

/// Point-to-member lookup for one spread: since the members partition the
/// nonzero vectors, `M(V_i)` is a member iff all of `M`'s images of a basis
/// of `V_i` fall into the same member.
#[derive(Clone, Debug)]
pub struct SpreadIndex {
    q: usize,
    n: usize,
    owner: Vec<u32>,
    bases: Vec<Matrix>,
}

impl SpreadIndex {
    pub fn new(s: &Spread, f: &ScalarField) -> Self {
        let q = f.order();
        let n = s.ambient.n;
        let mut owner = vec![u32::MAX; q.pow(n as u32)];
        for (i, u) in s.members.iter().enumerate() {
            for v in u.vectors(f).iter().skip(1) {
                owner[encode_vector(v, q)] = i as u32;
            }
        }
        SpreadIndex { q, n, owner, bases: s.members.iter().map(|u| u.basis().clone()).collect() }
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    /// Member containing a nonzero vector.
    #[inline]
    pub fn member_of(&self, v: &[u8]) -> Option<usize> {
        match self.owner[encode_vector(v, self.q)] {
            u32::MAX => None,
            i => Some(i as usize),
        }
    }

    /// `j` with `M(V_i) = V_j`, if any. `buf` needs length `n`.
    #[inline]
    pub fn image_member(&self, m: &Matrix, i: usize, f: &ScalarField, buf: &mut [u8]) -> Option<usize> {
        let basis = &self.bases[i];
        m.apply_into(basis.row(0), f, buf);
        let j = self.member_of(&buf[..self.n])?;
        for r in 1..basis.rows() {
            m.apply_into(basis.row(r), f, buf);
            if self.member_of(&buf[..self.n]) != Some(j) {
                return None;
            }
        }
        Some(j)
    }
}

/// Why a collection of spreads is not a partial parallelism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParallelismViolation {
    Spread { spread: usize, violation: SpreadViolation },
    SharedSubspace { first: usize, second: usize, key: SubspaceKey },
}

impl fmt::Display for ParallelismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParallelismViolation::Spread { spread, violation } => {
                write!(f, "spread {spread} is invalid: {violation}")
            }
            ParallelismViolation::SharedSubspace { first, second, key } => {
                write!(f, "spreads {first} and {second} share the subspace with key {key}")
            }
        }
    }
}

/// Pairwise disjoint spreads, with the group elements that produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialParallelism {
    pub ambient: Ambient,
    pub spreads: Vec<Spread>,
    pub generators: Vec<Matrix>,
}

impl PartialParallelism {
    pub fn len(&self) -> usize {
        self.spreads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spreads.is_empty()
    }

    /// Re-checks every spread and the pairwise disjointness from scratch.
    pub fn certify(&self, f: &ScalarField) -> Result<(), ParallelismViolation> {
        certify_parallelism(
            &self.spreads.iter().map(|s| s.members().to_vec()).collect::<Vec<_>>(),
            self.ambient,
            f,
        )
    }
}

/// Certifies raw member lists as pairwise disjoint spreads.
pub fn certify_parallelism(
    spreads: &[Vec<Subspace>],
    ambient: Ambient,
    f: &ScalarField,
) -> Result<(), ParallelismViolation> {
    for (i, s) in spreads.iter().enumerate() {
        certify_spread(s, ambient, f)
            .map_err(|violation| ParallelismViolation::Spread { spread: i, violation })?;
    }
    let mut owner = std::collections::HashMap::new();
    for (i, s) in spreads.iter().enumerate() {
        let mut own = HashSet::new();
        for u in s {
            let key = u.key();
            if !own.insert(key.clone()) {
                continue;
            }
            if let Some(&first) = owner.get(&key) {
                return Err(ParallelismViolation::SharedSubspace { first, second: i, key });
            }
            owner.insert(key, i);
        }
    }
    Ok(())
}
