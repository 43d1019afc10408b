//! The Picard lattice `Z^{1,8}` of a degree-1 del Pezzo surface.
//!
//! Classes are written in the basis `(L, E_1, ..., E_8)` where `L` is the pullback
//! of a line and `E_i` are the exceptional divisors of the eight blown-up points.
//! The intersection form is diagonal, `diag(1, -1, ..., -1)`, and the canonical
//! class is `K = -3L + E_1 + ... + E_8`.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rank of the Picard lattice.
pub const RANK: usize = 9;

/// Default bound on the size of a group closure.
pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

/// A divisor class given by its coefficients `(c_L; c_1, ..., c_8)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct DivisorClass(pub [i64; RANK]);

impl DivisorClass {
    pub const ZERO: DivisorClass = DivisorClass([0; RANK]);

    pub const fn line() -> Self {
        let mut c = [0; RANK];
        c[0] = 1;
        DivisorClass(c)
    }

    /// `E_i` for `i` in `1..=8`.
    pub fn exceptional(i: usize) -> Self {
        assert!((1..=8).contains(&i), "exceptional index {i} out of range 1..=8");
        let mut c = [0; RANK];
        c[i] = 1;
        DivisorClass(c)
    }

    pub const fn canonical() -> Self {
        DivisorClass([-3, 1, 1, 1, 1, 1, 1, 1, 1])
    }

    /// Unit vector for basis position `i` (0 is `L`).
    pub fn basis(i: usize) -> Self {
        let mut c = [0; RANK];
        c[i] = 1;
        DivisorClass(c)
    }

    pub fn coeffs(&self) -> &[i64; RANK] {
        &self.0
    }

    /// Coefficient of `L`.
    pub fn degree(&self) -> i64 {
        self.0[0]
    }

    pub fn pair(&self, other: &DivisorClass) -> i64 {
        pair(self, other)
    }

    pub fn square(&self) -> i64 {
        pair(self, self)
    }
}

/// The intersection pairing `c_L c'_L - sum c_i c'_i`.
pub fn pair(a: &DivisorClass, b: &DivisorClass) -> i64 {
    a.0[0] * b.0[0] - (1..RANK).map(|i| a.0[i] * b.0[i]).sum::<i64>()
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: DivisorClass) -> DivisorClass {
        DivisorClass(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        DivisorClass(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass(self.0.map(|c| -c))
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: DivisorClass) -> DivisorClass {
        DivisorClass(rhs.0.map(|c| self * c))
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.0[0])?;
        for (i, c) in self.0[1..].iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, " {c}")?;
        }
        write!(f, ")")
    }
}

/// A permutation of the indices `1..=8`, stored 0-based: `images[i]` is the image of `i + 1`, minus one.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    images: [usize; 8],
}

impl Permutation {
    pub fn identity() -> Self {
        Permutation { images: std::array::from_fn(|i| i) }
    }

    /// Builds a permutation from 1-based images. Fails unless `images` is a bijection of `1..=8`.
    pub fn from_images(images: [usize; 8]) -> Result<Self> {
        let mut seen = [false; 8];
        let mut out = [0; 8];
        for (i, &img) in images.iter().enumerate() {
            if !(1..=8).contains(&img) || seen[img - 1] {
                return Err(Error::Parse(format!("{images:?} is not a permutation of 1..8")));
            }
            seen[img - 1] = true;
            out[i] = img - 1;
        }
        Ok(Permutation { images: out })
    }

    /// Parses cycle notation such as `"(1 2 3)(4 5 6)"`. Entries may be separated by
    /// spaces or commas; `"()"` and the empty string denote the identity.
    pub fn parse_cycles(text: &str) -> Result<Self> {
        let mut images: [usize; 8] = std::array::from_fn(|i| i);
        let mut used = [false; 8];
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body_start =
                rest.strip_prefix('(').ok_or_else(|| Error::Parse(format!("expected '(' in cycle string {text:?}")))?;
            let close = body_start.find(')').ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
            let body = &body_start[..close];
            let mut cycle = Vec::new();
            for tok in body.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
                let k: usize = tok.parse().map_err(|_| Error::Parse(format!("bad index {tok:?} in {text:?}")))?;
                if !(1..=8).contains(&k) {
                    return Err(Error::Parse(format!("index {k} out of range 1..8 in {text:?}")));
                }
                if used[k - 1] {
                    return Err(Error::Parse(format!("index {k} repeated in {text:?}")));
                }
                used[k - 1] = true;
                cycle.push(k - 1);
            }
            for (pos, &k) in cycle.iter().enumerate() {
                images[k] = cycle[(pos + 1) % cycle.len()];
            }
            rest = body_start[close + 1..].trim_start();
        }
        Ok(Permutation { images })
    }

    /// Image of the 1-based index `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] + 1
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Cycle notation with fixed points omitted; the identity prints as `()`.
    pub fn to_cycle_string(&self) -> String {
        let mut out = String::new();
        let mut done = [false; 8];
        for start in 0..8 {
            if done[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = vec![start + 1];
            done[start] = true;
            let mut j = self.images[start];
            while j != start {
                cycle.push(j + 1);
                done[j] = true;
                j = self.images[j];
            }
            let parts: Vec<String> = cycle.iter().map(|k| k.to_string()).collect();
            out.push_str(&format!("({})", parts.join(" ")));
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

type Matrix = [[i64; RANK]; RANK];

/// True iff `m` preserves the pairing on every pair of basis vectors and fixes `K`.
pub fn is_isometry(m: &[[i64; RANK]; RANK]) -> bool {
    isometry_defect(m).is_none()
}

fn isometry_defect(m: &Matrix) -> Option<String> {
    let col = |j: usize| DivisorClass(std::array::from_fn(|r| m[r][j]));
    for i in 0..RANK {
        for j in i..RANK {
            let lhs = pair(&col(i), &col(j));
            let rhs = pair(&DivisorClass::basis(i), &DivisorClass::basis(j));
            if lhs != rhs {
                return Some(format!("pairing of images of basis vectors {i} and {j} is {lhs}, expected {rhs}"));
            }
        }
    }
    let k = DivisorClass::canonical();
    let mk = apply_matrix(m, &k);
    if mk != k {
        return Some(format!("K is sent to {mk}"));
    }
    None
}

fn apply_matrix(m: &Matrix, v: &DivisorClass) -> DivisorClass {
    DivisorClass(std::array::from_fn(|r| (0..RANK).map(|c| m[r][c] * v.0[c]).sum()))
}

/// A 9x9 integer matrix acting on column coefficient vectors that preserves the
/// pairing and fixes the canonical class. Validated at construction.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LatticeIsometry {
    matrix: Matrix,
}

impl LatticeIsometry {
    pub fn new(matrix: [[i64; RANK]; RANK]) -> Result<Self> {
        match isometry_defect(&matrix) {
            None => Ok(LatticeIsometry { matrix }),
            Some(reason) => Err(Error::NotAnIsometry(reason)),
        }
    }

    pub fn identity() -> Self {
        LatticeIsometry { matrix: std::array::from_fn(|r| std::array::from_fn(|c| (r == c) as i64)) }
    }

    /// The isometry fixing `L` and sending `E_i` to `E_{perm(i)}`.
    pub fn from_permutation(perm: &Permutation) -> Self {
        let mut matrix = [[0; RANK]; RANK];
        matrix[0][0] = 1;
        for i in 1..=8 {
            matrix[perm.apply(i)][i] = 1;
        }
        LatticeIsometry { matrix }
    }

    pub fn from_cycles(text: &str) -> Result<Self> {
        Ok(Self::from_permutation(&Permutation::parse_cycles(text)?))
    }

    /// Builds the isometry from the images of the basis vectors `L, E_1, ..., E_8`.
    pub fn from_basis_images(images: &[DivisorClass; RANK]) -> Result<Self> {
        Self::new(std::array::from_fn(|r| std::array::from_fn(|c| images[c].0[r])))
    }

    pub fn matrix(&self) -> &[[i64; RANK]; RANK] {
        &self.matrix
    }

    pub fn apply(&self, v: &DivisorClass) -> DivisorClass {
        apply_matrix(&self.matrix, v)
    }

    /// `self * other`: apply `other` first.
    pub fn compose(&self, other: &LatticeIsometry) -> LatticeIsometry {
        let matrix = std::array::from_fn(|r| {
            std::array::from_fn(|c| (0..RANK).map(|k| self.matrix[r][k] * other.matrix[k][c]).sum())
        });
        LatticeIsometry { matrix }
    }

    /// `J M^T J` with `J` the Gram matrix; equals `M^{-1}` for an isometry.
    pub fn inverse(&self) -> LatticeIsometry {
        let sign = |i: usize| if i == 0 { 1 } else { -1 };
        let matrix = std::array::from_fn(|r| std::array::from_fn(|c| sign(r) * self.matrix[c][r] * sign(c)));
        LatticeIsometry { matrix }
    }

    pub fn pow(&self, n: u32) -> LatticeIsometry {
        let mut acc = LatticeIsometry::identity();
        for _ in 0..n {
            acc = acc.compose(self);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        *self == LatticeIsometry::identity()
    }

    pub fn commutes_with(&self, other: &LatticeIsometry) -> bool {
        self.compose(other) == other.compose(self)
    }

    /// The permutation of `E_1..E_8` this isometry induces, if it fixes `L` and permutes the `E_i`.
    pub fn as_permutation(&self) -> Option<Permutation> {
        if self.apply(&DivisorClass::line()) != DivisorClass::line() {
            return None;
        }
        let mut images = [0; 8];
        for (i, img) in images.iter_mut().enumerate() {
            let e = self.apply(&DivisorClass::exceptional(i + 1));
            *img = (1..=8).find(|&j| e == DivisorClass::exceptional(j))?;
        }
        Permutation::from_images(images).ok()
    }

    /// Rank of the image of `M - I`.
    pub fn moved_rank(&self) -> usize {
        integer_rank(self.difference_rows().collect())
    }

    /// Rank of the fixed sublattice of this single element.
    pub fn fixed_rank(&self) -> usize {
        RANK - self.moved_rank()
    }

    fn difference_rows(&self) -> impl Iterator<Item = [i64; RANK]> + '_ {
        (0..RANK).map(move |r| std::array::from_fn(|c| self.matrix[r][c] - (r == c) as i64))
    }

    /// Parses the text format: nine lines of nine whitespace-separated integers, row-major.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse_matrix(text: &str) -> Result<Self> {
        let rows: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
        if rows.len() != RANK {
            return Err(Error::Parse(format!("expected {RANK} matrix rows, found {}", rows.len())));
        }
        let mut matrix = [[0; RANK]; RANK];
        for (r, line) in rows.iter().enumerate() {
            let entries: Vec<i64> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad matrix entry {t:?}"))))
                .collect::<Result<_>>()?;
            if entries.len() != RANK {
                return Err(Error::Parse(format!("row {} has {} entries, expected {RANK}", r + 1, entries.len())));
            }
            matrix[r].copy_from_slice(&entries);
        }
        Self::new(matrix)
    }

    pub fn to_matrix_text(&self) -> String {
        let mut out = String::new();
        for row in &self.matrix {
            let cells: Vec<String> = row.iter().map(i64::to_string).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

/// A finitely generated group of isometries.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub generators: Vec<LatticeIsometry>,
    pub label: String,
}

impl GroupSpec {
    pub fn new(label: impl Into<String>, generators: Vec<LatticeIsometry>) -> Self {
        GroupSpec { generators, label: label.into() }
    }

    pub fn trivial() -> Self {
        GroupSpec::new("trivial", Vec::new())
    }

    pub fn cyclic(label: impl Into<String>, g: LatticeIsometry) -> Self {
        GroupSpec::new(label, vec![g])
    }

    /// Group generated by the generators of both inputs.
    pub fn join(&self, other: &GroupSpec) -> GroupSpec {
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().cloned());
        GroupSpec::new(format!("<{}, {}>", self.label, other.label), generators)
    }

    pub fn closure(&self, cap: usize) -> Result<Vec<LatticeIsometry>> {
        group_closure(self, cap)
    }

    pub fn fixed_rank(&self) -> usize {
        fixed_rank(self)
    }
}

/// Rank of the common fixed sublattice `{v : Mv = v for every generator M}`.
pub fn fixed_rank(g: &GroupSpec) -> usize {
    let rows: Vec<[i64; RANK]> = g.generators.iter().flat_map(|m| m.difference_rows()).collect();
    RANK - integer_rank(rows)
}

/// Breadth-first closure of the generators, identity first. Errors once more than
/// `cap` distinct elements have been produced.
pub fn group_closure(g: &GroupSpec, cap: usize) -> Result<Vec<LatticeIsometry>> {
    if cap == 0 {
        return Err(Error::ClosureCapExceeded { cap });
    }
    let identity = LatticeIsometry::identity();
    let mut seen: HashSet<LatticeIsometry> = HashSet::from([identity.clone()]);
    let mut elements = vec![identity];
    let mut next = 0;
    while next < elements.len() {
        let current = elements[next].clone();
        next += 1;
        for generator in &g.generators {
            let product = current.compose(generator);
            if seen.insert(product.clone()) {
                if elements.len() == cap {
                    return Err(Error::ClosureCapExceeded { cap });
                }
                elements.push(product);
            }
        }
    }
    Ok(elements)
}

/// Rank over the rationals by fraction-free elimination with gcd normalisation.
pub fn integer_rank(rows: Vec<[i64; RANK]>) -> usize {
    let mut rows: Vec<[i128; RANK]> = rows.into_iter().map(|r| r.map(i128::from)).collect();
    let mut rank = 0;
    for col in 0..RANK {
        let Some(pivot) = (rank..rows.len()).filter(|&i| rows[i][col] != 0).min_by_key(|&i| rows[i][col].abs()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank];
        for row in rows.iter_mut().skip(rank + 1) {
            let factor = row[col];
            if factor == 0 {
                continue;
            }
            for c in col..RANK {
                row[c] = row[c] * pivot_row[col] - pivot_row[c] * factor;
            }
            normalise(row);
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

fn normalise(row: &mut [i128; RANK]) {
    let g = row.iter().fold(0i128, |acc, &x| gcd(acc, x.abs()));
    if g > 1 {
        for x in row.iter_mut() {
            *x /= g;
        }
    }
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The simple roots `L - E_1 - E_2 - E_3, E_1 - E_2, ..., E_7 - E_8`.
pub fn simple_roots() -> [DivisorClass; 8] {
    let e = DivisorClass::exceptional;
    std::array::from_fn(|i| match i {
        0 => DivisorClass::line() - e(1) - e(2) - e(3),
        _ => e(i) - e(i + 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> DivisorClass {
        DivisorClass::exceptional(i)
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pair(&e(1), &e(1)), -1);
        let k = DivisorClass::canonical();
        assert_eq!(pair(&k, &k), 1);
        let l12 = DivisorClass::line() - e(1) - e(2);
        assert_eq!(l12.square(), -1);
        assert_eq!(l12.pair(&k), -1);
    }

    #[test]
    fn isometry_examples() {
        assert!(is_isometry(LatticeIsometry::identity().matrix()));
        let swap = LatticeIsometry::from_cycles("(1 2)").unwrap();
        assert!(is_isometry(swap.matrix()));
        let mut flip = *LatticeIsometry::identity().matrix();
        flip[1][1] = -1;
        assert!(!is_isometry(&flip));
        assert!(matches!(LatticeIsometry::new(flip), Err(Error::NotAnIsometry(_))));
    }

    #[test]
    fn isometry_must_fix_k() {
        // L -> L, E_i -> -E_i preserves the form but sends K elsewhere.
        let mut neg = *LatticeIsometry::identity().matrix();
        for (i, row) in neg.iter_mut().enumerate().skip(1) {
            row[i] = -1;
        }
        assert!(!is_isometry(&neg));
    }

    #[test]
    fn fixed_rank_examples() {
        assert_eq!(fixed_rank(&GroupSpec::trivial()), 9);
        let g = GroupSpec::cyclic("(123)", LatticeIsometry::from_cycles("(1 2 3)").unwrap());
        assert_eq!(fixed_rank(&g), 7);
        let g = GroupSpec::cyclic("(123)(456)", LatticeIsometry::from_cycles("(1 2 3)(4 5 6)").unwrap());
        assert_eq!(fixed_rank(&g), 5);
    }

    #[test]
    fn fixed_vectors_of_three_cycle() {
        let g = LatticeIsometry::from_cycles("(1 2 3)").unwrap();
        for v in [DivisorClass::line(), e(1) + e(2) + e(3), e(4), e(8)] {
            assert_eq!(g.apply(&v), v);
        }
        assert_ne!(g.apply(&e(1)), e(1));
    }

    #[test]
    fn simple_root_examples() {
        let roots = simple_roots();
        assert_eq!(roots.len(), 8);
        assert_eq!(roots[0].square(), -2);
        for r in &roots {
            assert_eq!(r.square(), -2);
            assert_eq!(r.pair(&DivisorClass::canonical()), 0);
        }
        assert_eq!(roots[7], e(7) - e(8));
    }

    #[test]
    fn closure_examples() {
        let id = GroupSpec::cyclic("id", LatticeIsometry::identity());
        assert_eq!(group_closure(&id, 10).unwrap(), vec![LatticeIsometry::identity()]);
        let c3 = GroupSpec::cyclic("c3", LatticeIsometry::from_cycles("(1 2 3)").unwrap());
        assert_eq!(group_closure(&c3, 10).unwrap().len(), 3);
        let s3 = GroupSpec::new(
            "s3",
            vec![LatticeIsometry::from_cycles("(1 2 3)").unwrap(), LatticeIsometry::from_cycles("(1 2)").unwrap()],
        );
        let closure = group_closure(&s3, 10).unwrap();
        assert_eq!(closure.len(), 6);
        assert!(closure[0].is_identity());
        // every element is a permutation of {1,2,3} fixing 4..8
        for m in &closure {
            let p = m.as_permutation().unwrap();
            assert!((4..=8).all(|i| p.apply(i) == i));
        }
    }

    #[test]
    fn closure_cap_is_enforced() {
        let s3 = GroupSpec::new(
            "s3",
            vec![LatticeIsometry::from_cycles("(1 2 3)").unwrap(), LatticeIsometry::from_cycles("(1 2)").unwrap()],
        );
        assert_eq!(group_closure(&s3, 5), Err(Error::ClosureCapExceeded { cap: 5 }));
        assert!(group_closure(&s3, 6).is_ok());
        assert_eq!(group_closure(&GroupSpec::trivial(), 0), Err(Error::ClosureCapExceeded { cap: 0 }));
    }

    #[test]
    fn cycle_parsing() {
        let p = Permutation::parse_cycles("(1 2 3)(4 5 6)").unwrap();
        assert_eq!(p.apply(1), 2);
        assert_eq!(p.apply(3), 1);
        assert_eq!(p.apply(6), 4);
        assert_eq!(p.apply(8), 8);
        assert_eq!(p.to_cycle_string(), "(1 2 3)(4 5 6)");
        assert_eq!(Permutation::parse_cycles("(1,2)").unwrap().to_cycle_string(), "(1 2)");
        assert!(Permutation::parse_cycles("()").unwrap().is_identity());
        assert!(Permutation::parse_cycles("").unwrap().is_identity());
        for bad in ["(1 2", "(1 9)", "(1 1)", "(1 2)(2 3)", "1 2", "(a b)"] {
            assert!(Permutation::parse_cycles(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn matrix_text_round_trip() {
        let g = LatticeIsometry::from_cycles("(1 5)(2 3 8)").unwrap();
        let text = g.to_matrix_text();
        assert_eq!(text.lines().count(), 9);
        assert_eq!(LatticeIsometry::parse_matrix(&text).unwrap(), g);
        assert!(LatticeIsometry::parse_matrix("1 0 0").is_err());
    }

    #[test]
    fn inverse_and_permutation_view() {
        let g = LatticeIsometry::from_cycles("(1 2 3 4)(5 6)").unwrap();
        assert!(g.compose(&g.inverse()).is_identity());
        assert_eq!(g.as_permutation().unwrap().to_cycle_string(), "(1 2 3 4)(5 6)");
        assert_eq!(g.pow(4), LatticeIsometry::identity());
    }

    #[test]
    fn integer_rank_basics() {
        assert_eq!(integer_rank(vec![]), 0);
        assert_eq!(integer_rank(vec![[0; RANK]]), 0);
        let mut a = [0; RANK];
        a[0] = 2;
        a[1] = 4;
        let mut b = [0; RANK];
        b[0] = 3;
        b[1] = 6;
        assert_eq!(integer_rank(vec![a, b]), 1);
        b[2] = 1;
        assert_eq!(integer_rank(vec![a, b]), 2);
    }
}
