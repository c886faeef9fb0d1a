//! Static root-system data for the irreducible affine Weyl groups.
//!
//! Everything here is derived from a small description of each finite Dynkin
//! diagram (bonds and relative root lengths). From it we compute the Cartan
//! matrix, the positive roots, the highest root, the affine Coxeter matrix and
//! the exact integer action of every generator on the coroot lattice.
//!
//! Conventions:
//! - the affine node is generator 0, finite nodes are `1..=n`;
//! - finite nodes follow Bourbaki numbering, except for `G2` where `s1` is the
//!   long simple root (so that the affine node is attached to `s1`);
//! - generator actions are written in the basis of simple coroots, and the
//!   affine node reflects in the hyperplane `<θ, x> = 1` for the highest root θ.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::affine_map::AffineMap;
use crate::hecke_module::SignCharacter;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("cannot parse Cartan type {0:?}: expected a family letter A-G followed by a rank, e.g. \"G2\" or \"C3\"")]
    Parse(String),
    #[error("B2 is not a separate type: the affine Weyl group of B2 is the affine Weyl group of C2 (three generator classes); use C2")]
    B2Alias,
    #[error("unsupported rank {rank} for family {family}: {constraint}")]
    UnsupportedRank {
        family: Family,
        rank: usize,
        constraint: &'static str,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        };
        write!(f, "{c}")
    }
}

/// An irreducible reduced crystallographic root system, identified by family
/// and finite rank. The affine system has `rank + 1` generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanType {
    family: Family,
    rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self, CartanError> {
        let bad = |constraint| {
            Err(CartanError::UnsupportedRank {
                family,
                rank,
                constraint,
            })
        };
        match family {
            Family::A if rank < 1 => return bad("A_n needs n >= 1"),
            Family::B if rank == 2 => return Err(CartanError::B2Alias),
            Family::B if rank < 3 => return bad("B_n needs n >= 3"),
            Family::C if rank < 2 => return bad("C_n needs n >= 2"),
            Family::D if rank < 4 => return bad("D_n needs n >= 4 (D3 is A3)"),
            Family::E if !(6..=8).contains(&rank) => return bad("E_n needs n in {6, 7, 8}"),
            Family::F if rank != 4 => return bad("F only exists in rank 4"),
            Family::G if rank != 2 => return bad("G only exists in rank 2"),
            _ => {}
        }
        Ok(CartanType { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of generator classes `m` (1, 2 or 3).
    pub fn class_count(&self) -> usize {
        match self.family {
            Family::A if self.rank == 1 => 2,
            Family::A | Family::D | Family::E => 1,
            Family::B | Family::F | Family::G => 2,
            Family::C => 3,
        }
    }

    /// The list of types exercised by table exports and `--all-types` sweeps.
    pub fn catalogue() -> Vec<CartanType> {
        let mut out = Vec::new();
        let mut push = |f, r| out.push(CartanType::new(f, r).expect("catalogue entry"));
        for r in 1..=4 {
            push(Family::A, r);
        }
        for r in 3..=4 {
            push(Family::B, r);
        }
        for r in 2..=4 {
            push(Family::C, r);
        }
        push(Family::D, 4);
        push(Family::D, 5);
        for r in 6..=8 {
            push(Family::E, r);
        }
        push(Family::F, 4);
        push(Family::G, 2);
        out
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = CartanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let mut chars = t.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(CartanError::Parse(s.to_string())),
        };
        let rest = chars.as_str().trim_start_matches('_');
        let rank: usize = rest
            .parse()
            .map_err(|_| CartanError::Parse(s.to_string()))?;
        CartanType::new(family, rank)
    }
}

impl Serialize for CartanType {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Symmetric Coxeter matrix. `None` encodes an infinite label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterMatrix {
    entries: Vec<Vec<Option<u32>>>,
}

impl CoxeterMatrix {
    /// Builds a matrix after checking symmetry and the unit diagonal.
    pub fn new(entries: Vec<Vec<Option<u32>>>) -> Option<Self> {
        let n = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n || row[i] != Some(1) {
                return None;
            }
            for (j, &e) in row.iter().enumerate() {
                if entries[j][i] != e || (i != j && matches!(e, Some(0..=1))) {
                    return None;
                }
            }
        }
        Some(CoxeterMatrix { entries })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, s: usize, t: usize) -> Option<u32> {
        self.entries[s][t]
    }

    pub fn rows(&self) -> &[Vec<Option<u32>>] {
        &self.entries
    }
}

/// The generator classes `S_1, ..., S_m`, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassPartition {
    classes: Vec<Vec<usize>>,
}

impl ClassPartition {
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Index of the class containing generator `s`.
    pub fn class_of(&self, s: usize) -> usize {
        self.classes
            .iter()
            .position(|c| c.contains(&s))
            .expect("generator belongs to some class")
    }
}

/// Connected components of the Coxeter graph restricted to odd labels.
///
/// Classes are sorted by decreasing size, ties broken by smallest node index;
/// nodes within a class are increasing.
pub fn conjugacy_partition(matrix: &CoxeterMatrix) -> ClassPartition {
    let n = matrix.size();
    let mut seen = vec![false; n];
    let mut classes = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut component = vec![start];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(s) = stack.pop() {
            for t in 0..n {
                if !seen[t] && matches!(matrix.get(s, t), Some(m) if m % 2 == 1 && m > 1) {
                    seen[t] = true;
                    component.push(t);
                    stack.push(t);
                }
            }
        }
        component.sort_unstable();
        classes.push(component);
    }
    classes.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    ClassPartition { classes }
}

/// Exponents of the finite Weyl group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentTable(pub Vec<u32>);

pub fn exponents(ty: CartanType) -> ExponentTable {
    let n = ty.rank() as u32;
    let e = match ty.family() {
        Family::A => (1..=n).collect(),
        Family::B | Family::C => (1..=n).map(|i| 2 * i - 1).collect(),
        Family::D => {
            let mut v: Vec<u32> = (1..n).map(|i| 2 * i - 1).collect();
            v.push(n - 1);
            v.sort_unstable();
            v
        }
        Family::E => match n {
            6 => vec![1, 4, 5, 7, 8, 11],
            7 => vec![1, 5, 7, 9, 11, 13, 17],
            _ => vec![1, 7, 11, 13, 17, 19, 23, 29],
        },
        Family::F => vec![1, 5, 7, 11],
        Family::G => vec![1, 5],
    };
    ExponentTable(e)
}

/// Borel's degree-1 discrete series, as sign vectors.
///
/// Vectors are indexed by the closed-form variables `t_1, ..., t_m` of
/// [`crate::closed_forms::macdonald_closed_form`]; use a calibrated
/// [`crate::closed_forms::IndexBinding`] to move them to class order. The
/// Steinberg character comes first.
pub fn borel_discrete_series_list(ty: CartanType) -> Vec<SignCharacter> {
    let m = ty.class_count();
    let mut out = vec![SignCharacter::steinberg(m)];
    let mut extra = |v: &[i8]| out.push(SignCharacter::new(v.to_vec()).expect("valid signs"));
    match ty.family() {
        Family::B | Family::F | Family::G => extra(&[-1, 1]),
        Family::C => {
            extra(&[-1, -1, 1]);
            extra(&[-1, 1, -1]);
            if ty.rank() >= 4 {
                extra(&[-1, 1, 1]);
            }
        }
        _ => {}
    }
    out
}

/// Finite root-system data in the simple-root basis.
#[derive(Debug, Clone)]
pub struct RootData {
    /// `(α_i, α_i) / 2` for each simple root, normalised so short roots have 1.
    pub half_norms: Vec<i64>,
    /// Symmetric Gram matrix `(α_i, α_j)`.
    pub gram: Vec<Vec<i64>>,
    /// Cartan matrix `a_ij = <α_i^∨, α_j>`.
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots as coefficient vectors, sorted by height then lexicographically.
    pub positive_roots: Vec<Vec<i64>>,
    pub highest_root: Vec<i64>,
    /// Highest coroot in the simple-coroot basis.
    pub highest_coroot: Vec<i64>,
}

fn finite_diagram(ty: CartanType) -> (Vec<i64>, Vec<(usize, usize)>) {
    let n = ty.rank();
    let chain = |len: usize| {
        (0..len.saturating_sub(1))
            .map(|i| (i, i + 1))
            .collect::<Vec<_>>()
    };
    match ty.family() {
        Family::A => (vec![1; n], chain(n)),
        Family::B => {
            let mut d = vec![2; n];
            d[n - 1] = 1;
            (d, chain(n))
        }
        Family::C => {
            let mut d = vec![1; n];
            d[n - 1] = 2;
            (d, chain(n))
        }
        Family::D => {
            let mut edges = chain(n - 1);
            edges.push((n - 3, n - 1));
            (vec![1; n], edges)
        }
        Family::E => {
            // Bourbaki: 1-3-4-5-..., with 2 attached to 4.
            let mut edges = vec![(0, 2), (1, 3)];
            edges.extend((2..n - 1).map(|i| (i, i + 1)));
            (vec![1; n], edges)
        }
        Family::F => (vec![2, 2, 1, 1], chain(4)),
        Family::G => (vec![3, 1], chain(2)),
    }
}

pub fn root_data(ty: CartanType) -> RootData {
    let n = ty.rank();
    let (half_norms, edges) = finite_diagram(ty);
    let mut gram = vec![vec![0i64; n]; n];
    for i in 0..n {
        gram[i][i] = 2 * half_norms[i];
    }
    for &(i, j) in &edges {
        let v = -half_norms[i].max(half_norms[j]);
        gram[i][j] = v;
        gram[j][i] = v;
    }
    let cartan: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| gram[i][j] / half_norms[i]).collect())
        .collect();

    // Closure of the simple roots under simple reflections, staying positive.
    let simple: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|k| i64::from(i == k)).collect())
        .collect();
    let mut roots: HashSet<Vec<i64>> = simple.iter().cloned().collect();
    let mut frontier = simple;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for beta in &frontier {
            for i in 0..n {
                let pairing: i64 = (0..n).map(|k| beta[k] * cartan[i][k]).sum();
                if pairing == 0 {
                    continue;
                }
                let mut image = beta.clone();
                image[i] -= pairing;
                if image.iter().all(|&c| c >= 0) && roots.insert(image.clone()) {
                    next.push(image);
                }
            }
        }
        frontier = next;
    }
    let mut positive_roots: Vec<Vec<i64>> = roots.into_iter().collect();
    positive_roots.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| a.cmp(b))
    });
    let highest_root = positive_roots.last().expect("nonempty root system").clone();
    let theta_half_norm: i64 = {
        let mut s = 0;
        for i in 0..n {
            for j in 0..n {
                s += highest_root[i] * highest_root[j] * gram[i][j];
            }
        }
        s / 2
    };
    let highest_coroot = (0..n)
        .map(|k| {
            let num = highest_root[k] * half_norms[k];
            debug_assert_eq!(num % theta_half_norm, 0);
            num / theta_half_norm
        })
        .collect();
    RootData {
        half_norms,
        gram,
        cartan,
        positive_roots,
        highest_root,
        highest_coroot,
    }
}

fn label_from_product(p: i64) -> Option<u32> {
    match p {
        0 => Some(2),
        1 => Some(3),
        2 => Some(4),
        3 => Some(6),
        4 => None,
        _ => unreachable!("Cartan product {p} is not crystallographic"),
    }
}

/// An affine Weyl group presented as a Coxeter system with exact generator actions.
#[derive(Debug, Clone)]
pub struct AffineCoxeterSystem {
    cartan_type: CartanType,
    coxeter: CoxeterMatrix,
    partition: ClassPartition,
    class_of: Vec<usize>,
    generators: Vec<AffineMap>,
    roots: RootData,
}

impl AffineCoxeterSystem {
    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn coxeter_matrix(&self) -> &CoxeterMatrix {
        &self.coxeter
    }

    pub fn partition(&self) -> &ClassPartition {
        &self.partition
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn class_count(&self) -> usize {
        self.partition.len()
    }

    /// Class index of generator `s`.
    pub fn class_of(&self, s: usize) -> usize {
        self.class_of[s]
    }

    pub fn generator(&self, s: usize) -> &AffineMap {
        &self.generators[s]
    }

    pub fn generators(&self) -> &[AffineMap] {
        &self.generators
    }

    pub fn root_data(&self) -> &RootData {
        &self.roots
    }

    /// Dimension of the space the generators act on (the finite rank).
    pub fn dim(&self) -> usize {
        self.cartan_type.rank()
    }

    /// Evaluates a word `s_{i1} s_{i2} ... s_{ik}` as the composition of generator maps.
    pub fn evaluate_word(&self, word: &[usize]) -> AffineMap {
        word.iter()
            .fold(AffineMap::identity(self.dim()), |acc, &s| {
                acc.compose(&self.generators[s])
            })
    }
}

pub fn build_affine_system(ty: CartanType) -> AffineCoxeterSystem {
    let n = ty.rank();
    let roots = root_data(ty);
    let a = &roots.cartan;
    let theta = &roots.highest_root;
    let theta_vee = &roots.highest_coroot;

    // <θ, α_j^∨> and <θ^∨, α_j> for the affine node's bonds.
    let theta_on_coroot: Vec<i64> = (0..n)
        .map(|j| (0..n).map(|k| theta[k] * a[j][k]).sum())
        .collect();
    let theta_vee_on_root: Vec<i64> = (0..n)
        .map(|j| (0..n).map(|k| theta_vee[k] * a[k][j]).sum())
        .collect();

    let size = n + 1;
    let mut entries = vec![vec![Some(2u32); size]; size];
    for (i, row) in entries.iter_mut().enumerate() {
        row[i] = Some(1);
    }
    for j in 0..n {
        let label = label_from_product(theta_on_coroot[j] * theta_vee_on_root[j]);
        entries[0][j + 1] = label;
        entries[j + 1][0] = label;
        for k in 0..n {
            if j != k {
                entries[j + 1][k + 1] = label_from_product(a[j][k] * a[k][j]);
            }
        }
    }
    let coxeter = CoxeterMatrix::new(entries).expect("generated Coxeter matrix is valid");
    let partition = conjugacy_partition(&coxeter);
    let class_of = (0..size).map(|s| partition.class_of(s)).collect();

    let mut generators = Vec::with_capacity(size);
    // s_0: x -> x - (<θ, x> - 1) θ^∨
    let mut lin = AffineMap::identity(n).linear().to_vec();
    for i in 0..n {
        for j in 0..n {
            lin[i * n + j] -= theta_vee[i] * theta_on_coroot[j];
        }
    }
    generators.push(AffineMap::new(n, lin, theta_vee.clone()));
    // s_i: x -> x - <α_i, x> α_i^∨, with <α_i, α_j^∨> = a_ji
    for i in 0..n {
        let mut lin = AffineMap::identity(n).linear().to_vec();
        for j in 0..n {
            lin[i * n + j] -= a[j][i];
        }
        generators.push(AffineMap::new(n, lin, vec![0; n]));
    }

    AffineCoxeterSystem {
        cartan_type: ty,
        coxeter,
        partition,
        class_of,
        generators,
        roots,
    }
}

/// Version of the JSON table document produced by [`tables_document`].
pub const TABLES_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct TypeTable {
    #[serde(rename = "type")]
    pub cartan_type: CartanType,
    pub rank: usize,
    /// Rows of the Coxeter matrix; `null` marks an infinite label.
    pub coxeter_matrix: Vec<Vec<Option<u32>>>,
    pub classes: Vec<Vec<usize>>,
    pub m: usize,
    pub exponents: Vec<u32>,
    pub highest_root: Vec<i64>,
    pub highest_coroot: Vec<i64>,
    /// Borel sign vectors, indexed by closed-form variable.
    pub borel_list: Vec<Vec<i8>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TablesDocument {
    pub schema_version: u32,
    pub conventions: Vec<&'static str>,
    pub types: Vec<TypeTable>,
}

pub fn type_table(ty: CartanType) -> TypeTable {
    let sys = build_affine_system(ty);
    TypeTable {
        cartan_type: ty,
        rank: ty.rank(),
        coxeter_matrix: sys.coxeter.rows().to_vec(),
        classes: sys.partition.classes().to_vec(),
        m: sys.class_count(),
        exponents: exponents(ty).0,
        highest_root: sys.roots.highest_root.clone(),
        highest_coroot: sys.roots.highest_coroot.clone(),
        borel_list: borel_discrete_series_list(ty)
            .iter()
            .map(|e| e.signs().to_vec())
            .collect(),
    }
}

pub fn tables_document(types: &[CartanType]) -> TablesDocument {
    TablesDocument {
        schema_version: TABLES_SCHEMA_VERSION,
        conventions: vec![
            "generator 0 is the affine node; finite nodes use Bourbaki numbering (G2: s1 long)",
            "coxeter_matrix null entries are infinite labels",
            "classes are odd-label components sorted by (size desc, smallest node)",
            "borel_list vectors are indexed by the closed-form variables t1..tm",
        ],
        types: types.iter().map(|&t| type_table(t)).collect(),
    }
}

/// Generators fixed set-wise: helper used by diagram-automorphism checks.
pub fn partition_as_sets(p: &ClassPartition) -> BTreeSet<BTreeSet<usize>> {
    p.classes()
        .iter()
        .map(|c| c.iter().copied().collect())
        .collect()
}
