//! Roots, reflections and order-3 elements of `W(E8)` acting on the Picard lattice.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, LatticeIsometry, Permutation, RANK};

/// Default bound for [`element_order`]; element orders in `W(E8)` never exceed 30.
pub const DEFAULT_ORDER_CAP: usize = 60;

pub const ROOT_COUNT: usize = 240;

/// A class with square `-2` orthogonal to `K`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Root(DivisorClass);

impl Root {
    pub fn new(class: DivisorClass) -> Result<Root> {
        if class.square() == -2 && class.pair(&DivisorClass::canonical()) == 0 {
            Ok(Root(class))
        } else {
            Err(Error::NotARoot(class))
        }
    }

    pub fn class(&self) -> &DivisorClass {
        &self.0
    }

    pub fn pair(&self, other: &Root) -> i64 {
        self.0.pair(&other.0)
    }
}

/// The 240 roots in lexicographic coefficient order, computed once.
pub fn roots() -> &'static [Root] {
    static ROOTS: OnceLock<Vec<Root>> = OnceLock::new();
    ROOTS.get_or_init(search_roots)
}

pub fn enumerate_roots() -> Vec<Root> {
    roots().to_vec()
}

/// Bounded search for `v^2 = -2`, `v.K = 0`, i.e. `sum c_i = -3d` and
/// `sum c_i^2 = d^2 + 2`; this forces `|d| <= 4`.
fn search_roots() -> Vec<Root> {
    let mut out = Vec::new();
    for d in -4..=4i64 {
        let mut coeffs = [0i64; RANK];
        coeffs[0] = d;
        extend(&mut coeffs, 1, -3 * d, d * d + 2, &mut out);
    }
    out.sort();
    out
}

fn extend(coeffs: &mut [i64; RANK], pos: usize, sum_left: i64, sq_left: i64, out: &mut Vec<Root>) {
    if pos == RANK {
        if sum_left == 0 && sq_left == 0 {
            out.push(Root(DivisorClass(*coeffs)));
        }
        return;
    }
    if sum_left * sum_left > (RANK - pos) as i64 * sq_left {
        return;
    }
    let bound = (sq_left as f64).sqrt() as i64;
    for c in -bound..=bound {
        coeffs[pos] = c;
        extend(coeffs, pos + 1, sum_left - c, sq_left - c * c, out);
    }
    coeffs[pos] = 0;
}

/// `s_r(x) = x + (x.r) r`.
pub fn reflection(r: &Root) -> LatticeIsometry {
    let images: [DivisorClass; RANK] = std::array::from_fn(|i| {
        let x = DivisorClass::basis(i);
        x + x.pair(&r.0) * r.0
    });
    LatticeIsometry::from_basis_images(&images).expect("reflections are isometries")
}

pub fn reflection_of(class: &DivisorClass) -> Result<LatticeIsometry> {
    Ok(reflection(&Root::new(*class)?))
}

/// Product `s_1 s_2 ... s_k` of reflections in roots given by their index in [`roots`].
pub fn reflection_word(indices: &[usize]) -> Result<LatticeIsometry> {
    let all = roots();
    indices.iter().try_fold(LatticeIsometry::identity(), |acc, &i| {
        let r = all.get(i).ok_or_else(|| Error::Parse(format!("root index {i} out of range 0..{ROOT_COUNT}")))?;
        Ok(acc.compose(&reflection(r)))
    })
}

/// The rotation `s_a s_b` of the `A2` subsystem spanned by two roots with `a.b = 1`.
pub fn a2_rotation(a: &Root, b: &Root) -> Result<LatticeIsometry> {
    if a.pair(b) != 1 {
        return Err(Error::InvariantViolation(format!(
            "roots {} and {} pair to {}, an A2 rotation needs 1",
            a.0,
            b.0,
            a.pair(b)
        )));
    }
    Ok(reflection(a).compose(&reflection(b)))
}

/// Least `n >= 1` with `m^n = 1`.
pub fn element_order(m: &LatticeIsometry, cap: usize) -> Result<usize> {
    let mut power = m.clone();
    for n in 1..=cap {
        if power.is_identity() {
            return Ok(n);
        }
        power = power.compose(m);
    }
    Err(Error::OrderCapExceeded { cap })
}

/// The four conjugacy classes of elements of order 3 in `W(E8)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CarterType3 {
    A2,
    A2x2,
    A2x3,
    A2x4,
}

impl CarterType3 {
    pub const ALL: [CarterType3; 4] = [CarterType3::A2, CarterType3::A2x2, CarterType3::A2x3, CarterType3::A2x4];

    /// Number of `A2` factors.
    pub fn factors(self) -> usize {
        self as usize + 1
    }

    /// Rank of the invariant sublattice: 7, 5, 3, 1.
    pub fn fixed_rank(self) -> usize {
        9 - 2 * self.factors()
    }

    pub fn from_fixed_rank(rank: usize) -> Option<CarterType3> {
        CarterType3::ALL.into_iter().find(|t| t.fixed_rank() == rank)
    }
}

impl fmt::Display for CarterType3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CarterType3::A2 => f.write_str("A2"),
            t => write!(f, "A2^{}", t.factors()),
        }
    }
}

impl FromStr for CarterType3 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A2" => Ok(CarterType3::A2),
            "A2x2" | "A2^2" => Ok(CarterType3::A2x2),
            "A2x3" | "A2^3" => Ok(CarterType3::A2x3),
            "A2x4" | "A2^4" => Ok(CarterType3::A2x4),
            other => Err(Error::Parse(format!("unknown Carter type {other:?}"))),
        }
    }
}

/// Carter type of an element of order exactly 3, read off from its invariant rank.
pub fn carter_type_order3(m: &LatticeIsometry) -> Result<CarterType3> {
    let order = element_order(m, DEFAULT_ORDER_CAP)?;
    if order != 3 {
        return Err(Error::NotOrderThree { order });
    }
    let rank = m.fixed_rank();
    CarterType3::from_fixed_rank(rank)
        .ok_or_else(|| Error::InvariantViolation(format!("order-3 element with invariant rank {rank}")))
}

/// Pairwise orthogonal root pairs `(a_i, b_i)` with `a_i.b_i = 1`, chosen greedily in root order.
pub fn orthogonal_a2_pairs(count: usize) -> Vec<(Root, Root)> {
    let all = roots();
    let mut chosen: Vec<(Root, Root)> = Vec::with_capacity(count);
    let orthogonal_to_chosen =
        |r: &Root, chosen: &[(Root, Root)]| chosen.iter().all(|(a, b)| r.pair(a) == 0 && r.pair(b) == 0);
    while chosen.len() < count {
        let next = all
            .iter()
            .filter(|a| orthogonal_to_chosen(a, &chosen))
            .find_map(|a| all.iter().find(|b| a.pair(b) == 1 && orthogonal_to_chosen(b, &chosen)).map(|b| (*a, *b)));
        match next {
            Some(pair) => chosen.push(pair),
            None => break,
        }
    }
    chosen
}

/// A fixed, deterministic element of each order-3 class. `A2` and `A2^2` are the
/// permutations `(1 2 3)` and `(1 2 3)(4 5 6)`; `A2^3` and `A2^4` are products of
/// rotations on the greedy orthogonal `A2` subsystems.
pub fn representative_order3(t: CarterType3) -> LatticeIsometry {
    match t {
        CarterType3::A2 => LatticeIsometry::from_cycles("(1 2 3)").expect("valid cycle"),
        CarterType3::A2x2 => LatticeIsometry::from_cycles("(1 2 3)(4 5 6)").expect("valid cycle"),
        CarterType3::A2x3 | CarterType3::A2x4 => {
            let pairs = orthogonal_a2_pairs(t.factors());
            assert_eq!(pairs.len(), t.factors(), "E8 contains four orthogonal A2 subsystems");
            pairs.iter().fold(LatticeIsometry::identity(), |acc, (a, b)| {
                acc.compose(&a2_rotation(a, b).expect("greedy pairs have pairing 1"))
            })
        }
    }
}

/// Roots fixed by `g`.
pub fn fixed_roots(g: &LatticeIsometry) -> Vec<Root> {
    roots().iter().filter(|r| g.apply(&r.0) == r.0).copied().collect()
}

/// Order-3 elements built from `A2` rotations in roots fixed by `g`. Every reflection
/// in a `g`-fixed root commutes with `g`, so all candidates centralise `g`.
/// Single rotations come first, then products of two commuting rotations.
pub fn commuting_order3_candidates(g: &LatticeIsometry) -> Vec<LatticeIsometry> {
    let fixed = fixed_roots(g);
    let mut seen = HashSet::new();
    let mut rotations = Vec::new();
    for a in &fixed {
        for b in &fixed {
            if a.pair(b) == 1 {
                let rot = a2_rotation(a, b).expect("pairing checked");
                if seen.insert(rot.clone()) {
                    rotations.push(rot);
                }
            }
        }
    }
    let mut out = rotations.clone();
    for (i, x) in rotations.iter().enumerate() {
        for y in &rotations[i + 1..] {
            if !x.commutes_with(y) {
                continue;
            }
            let product = x.compose(y);
            if element_order(&product, DEFAULT_ORDER_CAP) == Ok(3) && seen.insert(product.clone()) {
                out.push(product);
            }
        }
    }
    out
}

/// Parses an element in one of the text formats: cycle notation `(1 2 3)`, a reflection
/// word `s i1 i2 ...` of root indices, the keyword `id`, or a 9x9 matrix.
pub fn parse_element(text: &str) -> Result<LatticeIsometry> {
    let body: String = text.lines().filter(|l| !l.trim_start().starts_with('#')).collect::<Vec<_>>().join("\n");
    let trimmed = body.trim();
    let first = trimmed.split_whitespace().next().unwrap_or("");
    if trimmed.is_empty() || first == "id" || first == "identity" {
        if trimmed.split_whitespace().count() > 1 {
            return Err(Error::Parse(format!("unexpected input after {first:?}")));
        }
        return Ok(LatticeIsometry::identity());
    }
    if trimmed.starts_with('(') {
        return Ok(LatticeIsometry::from_permutation(&Permutation::parse_cycles(trimmed)?));
    }
    if first == "s" {
        let indices = trimmed
            .split_whitespace()
            .skip(1)
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad root index {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        return reflection_word(&indices);
    }
    LatticeIsometry::parse_matrix(trimmed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{fixed_rank, simple_roots, GroupSpec};

    fn e(i: usize) -> DivisorClass {
        DivisorClass::exceptional(i)
    }

    #[test]
    fn root_examples() {
        let all = enumerate_roots();
        assert_eq!(all.len(), ROOT_COUNT);
        assert!(all.contains(&Root::new(e(1) - e(2)).unwrap()));
        assert!(Root::new(DivisorClass::canonical()).is_err());
        for r in simple_roots() {
            assert!(all.contains(&Root::new(r).unwrap()));
        }
    }

    #[test]
    fn roots_are_the_orbit_of_the_simple_roots() {
        // Closing the simple roots under simple reflections reaches every root.
        let simple: Vec<Root> = simple_roots().iter().map(|c| Root::new(*c).unwrap()).collect();
        let gens: Vec<LatticeIsometry> = simple.iter().map(reflection).collect();
        let mut orbit: HashSet<Root> = simple.iter().copied().collect();
        let mut frontier: Vec<Root> = simple.clone();
        while let Some(r) = frontier.pop() {
            for s in &gens {
                let image = Root::new(s.apply(r.class())).unwrap();
                if orbit.insert(image) {
                    frontier.push(image);
                }
            }
        }
        let searched: HashSet<Root> = roots().iter().copied().collect();
        assert_eq!(orbit, searched);
    }

    #[test]
    fn reflection_examples() {
        let r = Root::new(e(1) - e(2)).unwrap();
        assert_eq!(reflection(&r), LatticeIsometry::from_cycles("(1 2)").unwrap());
        for r in roots().iter().step_by(17) {
            let s = reflection(r);
            assert!(s.compose(&s).is_identity());
            assert_eq!(s.fixed_rank(), 8);
            assert_eq!(element_order(&s, DEFAULT_ORDER_CAP), Ok(2));
            assert_eq!(s.apply(r.class()), -*r.class());
        }
        assert!(reflection_of(&e(1)).is_err());
    }

    #[test]
    fn order_examples() {
        assert_eq!(element_order(&LatticeIsometry::identity(), 1), Ok(1));
        let g = LatticeIsometry::from_cycles("(1 2 3)(4 5)").unwrap();
        assert_eq!(element_order(&g, DEFAULT_ORDER_CAP), Ok(6));
        assert_eq!(element_order(&g, 5), Err(Error::OrderCapExceeded { cap: 5 }));
    }

    #[test]
    fn carter_examples() {
        let a2 = LatticeIsometry::from_cycles("(1 2 3)").unwrap();
        assert_eq!(carter_type_order3(&a2), Ok(CarterType3::A2));
        let a22 = LatticeIsometry::from_cycles("(1 2 3)(4 5 6)").unwrap();
        assert_eq!(carter_type_order3(&a22), Ok(CarterType3::A2x2));
        let swap = LatticeIsometry::from_cycles("(1 2)").unwrap();
        assert_eq!(carter_type_order3(&swap), Err(Error::NotOrderThree { order: 2 }));
    }

    #[test]
    fn representatives() {
        assert_eq!(representative_order3(CarterType3::A2), LatticeIsometry::from_cycles("(1 2 3)").unwrap());
        assert_eq!(representative_order3(CarterType3::A2x2), LatticeIsometry::from_cycles("(1 2 3)(4 5 6)").unwrap());
        for t in CarterType3::ALL {
            let rep = representative_order3(t);
            assert_eq!(carter_type_order3(&rep), Ok(t));
            assert_eq!(fixed_rank(&GroupSpec::cyclic(t.to_string(), rep.clone())), t.fixed_rank());
            assert_eq!(rep, representative_order3(t));
        }
        assert_eq!(representative_order3(CarterType3::A2x3).fixed_rank(), 3);
    }

    #[test]
    fn a2x4_has_no_fixed_vectors_orthogonal_to_k() {
        let rep = representative_order3(CarterType3::A2x4);
        assert_eq!(rep.fixed_rank(), 1);
        assert_eq!(rep.apply(&DivisorClass::canonical()), DivisorClass::canonical());
        assert!(fixed_roots(&rep).is_empty());
    }

    #[test]
    fn a2_rotation_properties() {
        let a = Root::new(e(1) - e(2)).unwrap();
        let b = Root::new(e(2) - e(3)).unwrap();
        let rot = a2_rotation(&a, &b).unwrap();
        assert_eq!(element_order(&rot, DEFAULT_ORDER_CAP), Ok(3));
        assert_eq!(rot.fixed_rank(), 7);
        let c = Root::new(e(4) - e(5)).unwrap();
        assert!(a2_rotation(&a, &c).is_err());
    }

    #[test]
    fn greedy_pairs_are_orthogonal() {
        let pairs = orthogonal_a2_pairs(4);
        assert_eq!(pairs.len(), 4);
        for (i, (a, b)) in pairs.iter().enumerate() {
            assert_eq!(a.pair(b), 1);
            for (c, d) in &pairs[i + 1..] {
                for (x, y) in [(a, c), (a, d), (b, c), (b, d)] {
                    assert_eq!(x.pair(y), 0);
                }
            }
        }
        assert_eq!(orthogonal_a2_pairs(5).len(), 4);
    }

    #[test]
    fn commuting_candidates_commute() {
        for t in [CarterType3::A2x2, CarterType3::A2x3] {
            let g = representative_order3(t);
            let cands = commuting_order3_candidates(&g);
            assert!(!cands.is_empty());
            for h in &cands {
                assert!(h.commutes_with(&g));
                assert_eq!(element_order(h, DEFAULT_ORDER_CAP), Ok(3));
            }
        }
        assert!(commuting_order3_candidates(&representative_order3(CarterType3::A2x4)).is_empty());
    }

    #[test]
    fn element_parsing() {
        assert_eq!(parse_element("(1 2 3)").unwrap(), LatticeIsometry::from_cycles("(1 2 3)").unwrap());
        assert!(parse_element("id").unwrap().is_identity());
        assert!(parse_element("  ").unwrap().is_identity());
        let i = roots().iter().position(|r| *r.class() == e(1) - e(2)).unwrap();
        assert_eq!(parse_element(&format!("s {i}")).unwrap(), LatticeIsometry::from_cycles("(1 2)").unwrap());
        assert!(parse_element(&format!("s {i} {i}")).unwrap().is_identity());
        let m = LatticeIsometry::from_cycles("(4 7)").unwrap();
        assert_eq!(parse_element(&format!("# comment\n{}", m.to_matrix_text())).unwrap(), m);
        assert!(parse_element("s 999").is_err());
        assert!(parse_element("1 2 3").is_err());
        assert!(parse_element("id extra").is_err());
    }

    #[test]
    fn carter_type_text() {
        for t in CarterType3::ALL {
            assert_eq!(t.to_string().parse::<CarterType3>(), Ok(t));
        }
        assert_eq!("A2x3".parse::<CarterType3>(), Ok(CarterType3::A2x3));
        assert!("A3".parse::<CarterType3>().is_err());
    }
}
