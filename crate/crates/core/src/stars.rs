//! Star configurations: six exceptional curves `H_1..H_6`, cyclically ordered, with
//! `H_i.H_{i+1} = 0`, `H_i.H_{i+2} = 2` and `H_i.H_{i+3} = 3` (indices mod 6).
//!
//! Any two disjoint curves `A`, `B` lie in exactly one star, namely
//! `A, B, -K-A+B, -2K-A, -2K-B, -K+A-B` in this cyclic order. There are 1120 stars and
//! every curve lies in 28 of them.
//!
//! Positions inside a star are 0-based throughout this module.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::curves::{CurveId, CurvePermutation, CurveTable, CURVE_COUNT};
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, LatticeIsometry};
use crate::par::{self, Strategy};

pub type StarKey = [CurveId; 6];

/// Number of stars.
pub const STAR_COUNT: usize = 1120;

/// Pairing `H_i.H_{i+d}` as a function of the cyclic distance `d`.
const STAR_PATTERN: [i64; 6] = [-1, 0, 2, 3, 2, 0];

/// The 12 symmetries of the hexagon as position maps: 6 rotations, then 6 reflections interleaved.
pub fn dihedral_relabelings() -> [[usize; 6]; 12] {
    std::array::from_fn(|n| {
        let r = n / 2;
        if n % 2 == 0 {
            std::array::from_fn(|i| (r + i) % 6)
        } else {
            std::array::from_fn(|i| (r + 6 - i) % 6)
        }
    })
}

/// Lexicographically least relabeling of a cyclically ordered 6-tuple.
pub fn canonical_key(curves: &[CurveId; 6]) -> StarKey {
    dihedral_relabelings().iter().map(|p| std::array::from_fn(|i| curves[p[i]])).min().expect("twelve relabelings")
}

/// True iff the six ids are distinct and the cyclic pairing pattern `(0, 2, 3)` holds.
pub fn is_star(table: &CurveTable, curves: &[CurveId; 6]) -> bool {
    let distinct: HashSet<_> = curves.iter().collect();
    if distinct.len() != 6 {
        return false;
    }
    (0..6).all(|i| (1..6).all(|d| table.pairing(curves[i], curves[(i + d) % 6]) == STAR_PATTERN[d]))
}

/// A star configuration, kept in a cyclic order `H_1..H_6`. Equality and hashing go
/// through the canonical key, so two orderings of the same star compare equal.
#[derive(Clone, Copy, Debug)]
pub struct StarConfiguration {
    curves: [CurveId; 6],
    key: StarKey,
}

impl PartialEq for StarConfiguration {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for StarConfiguration {}

impl std::hash::Hash for StarConfiguration {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl PartialOrd for StarConfiguration {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for StarConfiguration {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key.cmp(&other.key)
    }
}

impl StarConfiguration {
    pub fn new(table: &CurveTable, curves: [CurveId; 6]) -> Result<Self> {
        if !is_star(table, &curves) {
            let names: Vec<&str> = curves.iter().map(|&c| table.name(c)).collect();
            return Err(Error::InvariantViolation(format!("{names:?} is not a star configuration")));
        }
        Ok(Self::from_ordered(curves))
    }

    fn from_ordered(curves: [CurveId; 6]) -> Self {
        StarConfiguration { curves, key: canonical_key(&curves) }
    }

    /// The curves in cyclic order.
    pub fn curves(&self) -> &[CurveId; 6] {
        &self.curves
    }

    pub fn canonical_key(&self) -> StarKey {
        self.key
    }

    /// The same star re-ordered by its canonical key.
    pub fn canonical(&self) -> StarConfiguration {
        StarConfiguration { curves: self.key, key: self.key }
    }

    pub fn contains(&self, id: CurveId) -> bool {
        self.curves.contains(&id)
    }

    pub fn position(&self, id: CurveId) -> Option<usize> {
        self.curves.iter().position(|&c| c == id)
    }

    /// Image under a curve permutation induced by an isometry; order is carried along.
    pub fn map(&self, perm: &CurvePermutation) -> StarConfiguration {
        Self::from_ordered(self.curves.map(|c| perm.apply(c)))
    }

    /// Sum of the six classes; always `-6K`.
    pub fn class_sum(&self, table: &CurveTable) -> DivisorClass {
        self.curves.iter().fold(DivisorClass::ZERO, |acc, &c| acc + table.class(c))
    }

    /// `pairing_matrix(other)[i][j] = H_i . H'_j`.
    pub fn pairing_matrix(&self, other: &StarConfiguration, table: &CurveTable) -> [[i64; 6]; 6] {
        std::array::from_fn(|i| std::array::from_fn(|j| table.pairing(self.curves[i], other.curves[j])))
    }

    /// Text form such as `{E7, E8, C7-8, bE7, bE8, C8-7}`.
    pub fn to_text(&self, table: &CurveTable) -> String {
        let names: Vec<&str> = self.curves.iter().map(|&c| table.name(c)).collect();
        format!("{{{}}}", names.join(", "))
    }

    /// Parses the text form. The listed order must itself be a star order.
    pub fn parse(table: &CurveTable, text: &str) -> Result<Self> {
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("star must be written as {{A, B, ...}}: {text:?}")))?;
        let ids = inner.split(',').map(|n| table.id_of_name(n.trim())).collect::<Result<Vec<_>>>()?;
        let curves: [CurveId; 6] =
            ids.try_into().map_err(|v: Vec<_>| Error::Parse(format!("a star has 6 curves, got {}", v.len())))?;
        Self::new(table, curves)
    }

    pub fn report(&self, table: &CurveTable) -> StarReport {
        StarReport {
            canonical_key: self.key,
            curves: self.curves.iter().map(|&c| table.name(c).to_string()).collect(),
            pairing_matrix: self.pairing_matrix(self, table),
        }
    }
}

/// JSON form of a star.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarReport {
    pub canonical_key: StarKey,
    pub curves: Vec<String>,
    pub pairing_matrix: [[i64; 6]; 6],
}

/// The star containing two disjoint curves, ordered with `H_1 = a` and `H_2 = b`.
pub fn star_through(table: &CurveTable, a: CurveId, b: CurveId) -> Result<StarConfiguration> {
    let pairing = table.pairing(a, b);
    if a == b || pairing != 0 {
        return Err(Error::NotDisjoint { a: table.name(a).to_string(), b: table.name(b).to_string(), pairing });
    }
    let k = DivisorClass::canonical();
    let (ca, cb) = (table.class(a), table.class(b));
    let classes = [ca, cb, -k - ca + cb, -2 * k - ca, -2 * k - cb, -k + ca - cb];
    let mut curves = [0; 6];
    for (slot, class) in curves.iter_mut().zip(classes) {
        *slot = table.id_of(&class).ok_or(Error::NotACurve(class))?;
    }
    debug_assert!(is_star(table, &curves));
    Ok(StarConfiguration::from_ordered(curves))
}

/// All stars, sorted by canonical key, with per-curve membership lists.
#[derive(Debug)]
pub struct StarTable {
    stars: Vec<StarConfiguration>,
    index: HashMap<StarKey, usize>,
    by_curve: Vec<Vec<usize>>,
}

impl StarTable {
    pub fn build(table: &CurveTable, strategy: Strategy) -> Self {
        let ids: Vec<CurveId> = (0..CURVE_COUNT).collect();
        let per_curve: Vec<Vec<StarKey>> = par::map_slice(&ids, strategy, |&a| {
            table
                .disjoint_partners(a)
                .into_iter()
                .filter(|&b| b > a)
                .map(|b| star_through(table, a, b).expect("disjoint pair").canonical_key())
                .collect()
        });
        let mut keys: Vec<StarKey> = per_curve.into_iter().flatten().collect();
        keys.sort_unstable();
        keys.dedup();
        let stars: Vec<StarConfiguration> = keys.iter().map(|k| StarConfiguration { curves: *k, key: *k }).collect();
        let index = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let mut by_curve = vec![Vec::new(); CURVE_COUNT];
        for (i, s) in stars.iter().enumerate() {
            for &c in s.curves() {
                by_curve[c].push(i);
            }
        }
        StarTable { stars, index, by_curve }
    }

    pub fn global() -> &'static StarTable {
        static STARS: OnceLock<StarTable> = OnceLock::new();
        STARS.get_or_init(|| StarTable::build(CurveTable::global(), Strategy::default()))
    }

    pub fn stars(&self) -> &[StarConfiguration] {
        &self.stars
    }

    pub fn star(&self, index: usize) -> &StarConfiguration {
        &self.stars[index]
    }

    pub fn index_of(&self, star: &StarConfiguration) -> Option<usize> {
        self.index.get(&star.key).copied()
    }

    /// Indices of the stars containing a curve.
    pub fn containing(&self, id: CurveId) -> &[usize] {
        &self.by_curve[id]
    }
}

/// All stars, deduplicated, in canonical order.
pub fn enumerate_stars() -> Vec<StarConfiguration> {
    StarTable::global().stars().to_vec()
}

/// How an exceptional curve outside a star meets its six members.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Profile {
    /// `A.H_i = 1` for every `i`.
    AllOnes,
    /// `A.H_k = A.H_{k+1} = 0`, `A.H_{k+2} = A.H_{k+5} = 1`, `A.H_{k+3} = A.H_{k+4} = 2`.
    Touching(usize),
}

pub fn profile(table: &CurveTable, a: CurveId, star: &StarConfiguration) -> Result<Profile> {
    if star.contains(a) {
        return Err(Error::CurveInStar(table.name(a).to_string()));
    }
    let p: [i64; 6] = star.curves.map(|h| table.pairing(a, h));
    if p.iter().all(|&x| x == 1) {
        return Ok(Profile::AllOnes);
    }
    const TOUCHING: [i64; 6] = [0, 0, 1, 2, 2, 1];
    (0..6).find(|&k| (0..6).all(|d| p[(k + d) % 6] == TOUCHING[d])).map(Profile::Touching).ok_or_else(|| {
        Error::InvariantViolation(format!(
            "curve {} meets star {} with pattern {p:?}",
            table.name(a),
            star.to_text(table)
        ))
    })
}

/// The three ways two curve-disjoint stars can meet.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PairType {
    Asynchronized,
    Synchronized,
    Abnormal,
}

impl PairType {
    pub const ALL: [PairType; 3] = [PairType::Asynchronized, PairType::Synchronized, PairType::Abnormal];

    /// Reference pairing matrix `A_i.B_j` in the standard labelling.
    pub fn pattern(self) -> [[i64; 6]; 6] {
        match self {
            PairType::Asynchronized => [[1; 6]; 6],
            PairType::Synchronized => {
                std::array::from_fn(|i| std::array::from_fn(|j| [1, 2, 2, 1, 0, 0][(j + 6 - i) % 6]))
            }
            PairType::Abnormal => std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    let side = |x: usize| match x {
                        1 | 2 => Some(0),
                        4 | 5 => Some(1),
                        _ => None,
                    };
                    match (side(i), side(j)) {
                        (Some(a), Some(b)) if a == b => 2,
                        (Some(_), Some(_)) => 0,
                        _ => 1,
                    }
                })
            }),
        }
    }

    /// Order of the automorphism group of the 12-curve weighted graph of such a pair.
    pub fn automorphism_order(self) -> u64 {
        match self {
            PairType::Asynchronized => 288,
            PairType::Synchronized => 24,
            PairType::Abnormal => 16,
        }
    }
}

impl fmt::Display for PairType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PairType::Asynchronized => "asynchronized",
            PairType::Synchronized => "synchronized",
            PairType::Abnormal => "abnormal",
        };
        f.write_str(s)
    }
}

type FlatMatrix = [i8; 36];

/// For each pair type, every matrix obtained from its pattern by relabeling both stars
/// with one of the 12 x 12 hexagon symmetries.
fn relabeled_patterns() -> &'static [(PairType, HashSet<FlatMatrix>); 3] {
    static PATTERNS: OnceLock<[(PairType, HashSet<FlatMatrix>); 3]> = OnceLock::new();
    PATTERNS.get_or_init(|| {
        let dihedral = dihedral_relabelings();
        PairType::ALL.map(|t| {
            let pattern = t.pattern();
            let mut set = HashSet::new();
            for p in &dihedral {
                for q in &dihedral {
                    let mut m = [0i8; 36];
                    for i in 0..6 {
                        for j in 0..6 {
                            m[p[i] * 6 + q[j]] = pattern[i][j] as i8;
                        }
                    }
                    set.insert(m);
                }
            }
            (t, set)
        })
    })
}

/// Pair types whose pattern matches the pairing matrix of two stars under some relabeling.
pub fn matching_pair_types(table: &CurveTable, s1: &StarConfiguration, s2: &StarConfiguration) -> Vec<PairType> {
    let mut observed = [0i8; 36];
    for i in 0..6 {
        for j in 0..6 {
            observed[i * 6 + j] = table.pairing(s1.curves[i], s2.curves[j]) as i8;
        }
    }
    relabeled_patterns().iter().filter(|(_, set)| set.contains(&observed)).map(|(t, _)| *t).collect()
}

fn shared_curves(table: &CurveTable, s1: &StarConfiguration, s2: &StarConfiguration) -> Vec<String> {
    s1.curves.iter().filter(|c| s2.contains(**c)).map(|&c| table.name(c).to_string()).collect()
}

/// Classifies two stars. Stars that share curves (necessarily a Bertini pair `A, -2K-A`)
/// fall outside all three patterns and are reported as [`Error::SharedCurves`].
pub fn classify_pair(table: &CurveTable, s1: &StarConfiguration, s2: &StarConfiguration) -> Result<PairType> {
    let shared = shared_curves(table, s1, s2);
    if !shared.is_empty() {
        return Err(Error::SharedCurves(shared));
    }
    match matching_pair_types(table, s1, s2)[..] {
        [t] => Ok(t),
        [] => Err(Error::InvariantViolation(format!(
            "stars {} and {} match no pair pattern",
            s1.to_text(table),
            s2.to_text(table)
        ))),
        ref many => Err(Error::InvariantViolation(format!(
            "stars {} and {} match several pair patterns: {many:?}",
            s1.to_text(table),
            s2.to_text(table)
        ))),
    }
}

/// How two stars relate: one of the three pair types, or sharing a Bertini pair of curves.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum StarRelation {
    Pair(PairType),
    SharesCurves,
}

impl fmt::Display for StarRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StarRelation::Pair(t) => t.fmt(f),
            StarRelation::SharesCurves => f.write_str("shares-curves"),
        }
    }
}

pub fn relation(table: &CurveTable, s1: &StarConfiguration, s2: &StarConfiguration) -> Result<StarRelation> {
    match classify_pair(table, s1, s2) {
        Ok(t) => Ok(StarRelation::Pair(t)),
        Err(Error::SharedCurves(_)) => Ok(StarRelation::SharesCurves),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum ActionKind {
    /// All six curves fixed.
    Trivial,
    /// Some curve moved.
    Faithful,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct StarAction {
    pub star: StarConfiguration,
    pub kind: ActionKind,
}

/// Stars mapped to themselves (as sets) by the curve permutation.
pub fn invariant_stars_of(perm: &CurvePermutation) -> Vec<StarAction> {
    StarTable::global()
        .stars()
        .iter()
        .filter_map(|s| {
            let image = s.map(perm);
            (image == *s).then(|| {
                let kind = if s.curves.iter().all(|&c| perm.apply(c) == c) {
                    ActionKind::Trivial
                } else {
                    ActionKind::Faithful
                };
                StarAction { star: *s, kind }
            })
        })
        .collect()
}

pub fn invariant_stars(m: &LatticeIsometry) -> Result<Vec<StarAction>> {
    Ok(invariant_stars_of(&CurveTable::global().permutation_of(m)?))
}

/// Invariant curves, invariant stars and how those stars relate, for one element.
#[derive(Clone, Debug)]
pub struct Census {
    pub invariant_curves: Vec<CurveId>,
    pub stars: Vec<StarAction>,
    /// `(i, j, relation)` for indices into `stars`, `i < j`.
    pub relations: Vec<(usize, usize, StarRelation)>,
}

impl Census {
    pub fn of(m: &LatticeIsometry) -> Result<Census> {
        let table = CurveTable::global();
        let perm = table.permutation_of(m)?;
        let stars = invariant_stars_of(&perm);
        let mut relations = Vec::new();
        for i in 0..stars.len() {
            for j in i + 1..stars.len() {
                relations.push((i, j, relation(table, &stars[i].star, &stars[j].star)?));
            }
        }
        Ok(Census { invariant_curves: perm.fixed_curves(), stars, relations })
    }

    pub fn with_kind(&self, kind: ActionKind) -> Vec<StarConfiguration> {
        self.stars.iter().filter(|a| a.kind == kind).map(|a| a.star).collect()
    }

    pub fn faithful(&self) -> Vec<StarConfiguration> {
        self.with_kind(ActionKind::Faithful)
    }

    pub fn trivial(&self) -> Vec<StarConfiguration> {
        self.with_kind(ActionKind::Trivial)
    }
}

/// Order of the group of permutations of the curves in the given stars that preserve all
/// pairings. Counted by backtracking; candidates are restricted to vertices whose sorted
/// pairing rows agree.
pub fn star_graph_automorphisms(table: &CurveTable, stars: &[StarConfiguration]) -> u64 {
    let mut vertices: Vec<CurveId> = stars.iter().flat_map(|s| s.curves).collect();
    vertices.sort_unstable();
    vertices.dedup();
    let n = vertices.len();
    let weight: Vec<Vec<i64>> =
        vertices.iter().map(|&a| vertices.iter().map(|&b| table.pairing(a, b)).collect()).collect();
    let signature: Vec<Vec<i64>> = weight
        .iter()
        .map(|row| {
            let mut r = row.clone();
            r.sort_unstable();
            r
        })
        .collect();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    count_extensions(0, &weight, &signature, &mut image, &mut used)
}

fn count_extensions(
    v: usize,
    weight: &[Vec<i64>],
    signature: &[Vec<i64>],
    image: &mut [usize],
    used: &mut [bool],
) -> u64 {
    let n = weight.len();
    if v == n {
        return 1;
    }
    let mut total = 0;
    for cand in 0..n {
        if used[cand] || signature[cand] != signature[v] {
            continue;
        }
        if (0..v).any(|u| weight[image[u]][cand] != weight[u][v]) {
            continue;
        }
        image[v] = cand;
        used[cand] = true;
        total += count_extensions(v + 1, weight, signature, image, used);
        used[cand] = false;
    }
    image[v] = usize::MAX;
    total
}

/// Outcome counts of classifying every unordered pair of distinct stars.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCensus {
    pub asynchronized: usize,
    pub synchronized: usize,
    pub abnormal: usize,
    /// Pairs sharing a Bertini pair of curves; these match no pattern.
    pub shared_curves: usize,
    /// Curve-disjoint pairs matching no pattern.
    pub unmatched: usize,
    /// Pairs matching more than one pattern.
    pub ambiguous: usize,
}

impl PairCensus {
    pub fn total(&self) -> usize {
        self.asynchronized + self.synchronized + self.abnormal + self.shared_curves + self.unmatched + self.ambiguous
    }

    fn add(mut self, other: PairCensus) -> PairCensus {
        self.asynchronized += other.asynchronized;
        self.synchronized += other.synchronized;
        self.abnormal += other.abnormal;
        self.shared_curves += other.shared_curves;
        self.unmatched += other.unmatched;
        self.ambiguous += other.ambiguous;
        self
    }
}

/// Classifies all unordered pairs of stars.
pub fn pair_census(curves: &CurveTable, stars: &StarTable, strategy: Strategy) -> PairCensus {
    let all = stars.stars();
    let rows = par::map_range(0..all.len(), strategy, |i| {
        let mut row = PairCensus::default();
        for j in i + 1..all.len() {
            let matches = matching_pair_types(curves, &all[i], &all[j]);
            match matches[..] {
                [PairType::Asynchronized] => row.asynchronized += 1,
                [PairType::Synchronized] => row.synchronized += 1,
                [PairType::Abnormal] => row.abnormal += 1,
                [] if all[i].curves.iter().any(|&c| all[j].contains(c)) => row.shared_curves += 1,
                [] => row.unmatched += 1,
                _ => row.ambiguous += 1,
            }
        }
        row
    });
    rows.into_iter().fold(PairCensus::default(), PairCensus::add)
}

/// Outcome counts of profiling every curve against every star not containing it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileCensus {
    pub all_ones: usize,
    pub touching: usize,
    pub violations: usize,
}

pub fn profile_census(curves: &CurveTable, stars: &StarTable, strategy: Strategy) -> ProfileCensus {
    let ids: Vec<CurveId> = (0..CURVE_COUNT).collect();
    par::map_slice(&ids, strategy, |&a| {
        let mut out = ProfileCensus::default();
        for s in stars.stars().iter().filter(|s| !s.contains(a)) {
            match profile(curves, a, s) {
                Ok(Profile::AllOnes) => out.all_ones += 1,
                Ok(Profile::Touching(_)) => out.touching += 1,
                Err(_) => out.violations += 1,
            }
        }
        out
    })
    .into_iter()
    .fold(ProfileCensus::default(), |acc, x| ProfileCensus {
        all_ones: acc.all_ones + x.all_ones,
        touching: acc.touching + x.touching,
        violations: acc.violations + x.violations,
    })
}
