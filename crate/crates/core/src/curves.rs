//! The 240 exceptional classes of a degree-1 del Pezzo surface.
//!
//! Every class `D` with `D^2 = -1` and `D.K = -1` falls into one of seven families,
//! told apart by the coefficient of `L`:
//!
//! | `c_L` | family | name      | class                                   |
//! |-------|--------|-----------|-----------------------------------------|
//! | 0     | `E`    | `E1`      | `E_i`                                   |
//! | 1     | `L2`   | `L12`     | `L - E_i - E_j`                         |
//! | 2     | `Q`    | `Q123`    | `2L + E_i + E_j + E_k - sum E`          |
//! | 3     | `C`    | `C1-2`    | `3L - E_i + E_j - sum E`                |
//! | 4     | `BQ`   | `bQ123`   | `-2K - Q_ijk`                           |
//! | 5     | `BL`   | `bL12`    | `-2K - L_ij`                            |
//! | 6     | `BE`   | `bE1`     | `-2K - E_i`                             |
//!
//! Curves carry dense ids `0..240` in lexicographic order of their coefficient vectors.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, LatticeIsometry, RANK};

pub type CurveId = usize;

pub const CURVE_COUNT: usize = 240;

/// Family sizes in the order `E, L2, Q, C, BQ, BL, BE`.
pub const FAMILY_SIZES: [usize; 7] = [8, 28, 56, 56, 56, 28, 8];

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Family {
    E,
    L2,
    Q,
    C,
    BQ,
    BL,
    BE,
}

impl Family {
    pub const ALL: [Family; 7] = [Family::E, Family::L2, Family::Q, Family::C, Family::BQ, Family::BL, Family::BE];

    pub fn from_degree(c_l: i64) -> Option<Family> {
        usize::try_from(c_l).ok().and_then(|d| Family::ALL.get(d).copied())
    }

    pub fn degree(self) -> i64 {
        self as i64
    }

    /// The family exchanged with this one by the Bertini involution.
    pub fn bertini_partner(self) -> Family {
        Family::ALL[6 - self as usize]
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::E => "E",
            Family::L2 => "L",
            Family::Q => "Q",
            Family::C => "C",
            Family::BQ => "bQ",
            Family::BL => "bL",
            Family::BE => "bE",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct ExceptionalCurve {
    pub id: CurveId,
    pub class: DivisorClass,
    pub family: Family,
}

impl ExceptionalCurve {
    pub fn name(&self) -> String {
        curve_name(&self.class).expect("table classes are exceptional")
    }
}

fn minus_k2() -> DivisorClass {
    -2 * DivisorClass::canonical()
}

fn e(i: usize) -> DivisorClass {
    DivisorClass::exceptional(i)
}

fn sum_e() -> DivisorClass {
    (1..=8).map(e).fold(DivisorClass::ZERO, |a, b| a + b)
}

pub fn line_class(i: usize, j: usize) -> DivisorClass {
    DivisorClass::line() - e(i) - e(j)
}

pub fn conic_class(i: usize, j: usize, k: usize) -> DivisorClass {
    2 * DivisorClass::line() + e(i) + e(j) + e(k) - sum_e()
}

pub fn cubic_class(i: usize, j: usize) -> DivisorClass {
    3 * DivisorClass::line() - e(i) + e(j) - sum_e()
}

pub fn bertini_class(c: &DivisorClass) -> DivisorClass {
    minus_k2() - *c
}

/// Exceptional classes generated from the seven family formulas.
pub fn family_classes() -> Vec<DivisorClass> {
    let mut low = Vec::new();
    for i in 1..=8 {
        low.push(e(i));
        for j in 1..=8 {
            if j > i {
                low.push(line_class(i, j));
                for k in j + 1..=8 {
                    low.push(conic_class(i, j, k));
                }
            }
            if j != i {
                low.push(cubic_class(i, j));
            }
        }
    }
    let high: Vec<DivisorClass> = low.iter().filter(|c| c.degree() < 3).map(bertini_class).collect();
    low.extend(high);
    low.sort();
    low
}

/// All integer solutions of `D^2 = -1`, `D.K = -1`, found by bounded search.
///
/// With `D = (d; c_1..c_8)` the two equations read `sum c_i = 1 - 3d` and
/// `sum c_i^2 = d^2 + 1`. Cauchy-Schwarz gives `(1 - 3d)^2 <= 8 (d^2 + 1)`, so the
/// window `-10..=10` for `d` is more than enough.
pub fn solve_exceptional_classes() -> Vec<DivisorClass> {
    let mut out = Vec::new();
    for d in -10..=10i64 {
        let target_sum = 1 - 3 * d;
        let target_sq = d * d + 1;
        let mut coeffs = [0i64; RANK];
        coeffs[0] = d;
        search_coeffs(&mut coeffs, 1, target_sum, target_sq, &mut out);
    }
    out.sort();
    out
}

fn search_coeffs(coeffs: &mut [i64; RANK], pos: usize, sum_left: i64, sq_left: i64, out: &mut Vec<DivisorClass>) {
    if pos == RANK {
        if sum_left == 0 && sq_left == 0 {
            out.push(DivisorClass(*coeffs));
        }
        return;
    }
    let slots = (RANK - pos) as i64;
    // remaining coefficients must satisfy sum_left^2 <= slots * sq_left
    if sum_left * sum_left > slots * sq_left {
        return;
    }
    let bound = (sq_left as f64).sqrt() as i64;
    for c in -bound..=bound {
        if c * c > sq_left {
            continue;
        }
        coeffs[pos] = c;
        search_coeffs(coeffs, pos + 1, sum_left - c, sq_left - c * c, out);
    }
    coeffs[pos] = 0;
}

/// Name of an exceptional class, e.g. `Q123` or `C1-2`; `None` for other classes.
pub fn curve_name(c: &DivisorClass) -> Option<String> {
    if c.square() != -1 || c.pair(&DivisorClass::canonical()) != -1 {
        return None;
    }
    let family = Family::from_degree(c.degree())?;
    let with_value = |v: i64| -> Vec<usize> { (1..=8).filter(|&i| c.0[i] == v).collect() };
    let digits = |idx: &[usize]| idx.iter().map(|i| i.to_string()).collect::<String>();
    let name = match family {
        Family::E => format!("E{}", digits(&with_value(1))),
        Family::L2 => format!("L{}", digits(&with_value(-1))),
        Family::Q => format!("Q{}", digits(&with_value(0))),
        Family::C => format!("C{}-{}", digits(&with_value(-2)), digits(&with_value(0))),
        Family::BQ => format!("bQ{}", digits(&with_value(-2))),
        Family::BL => format!("bL{}", digits(&with_value(-1))),
        Family::BE => format!("bE{}", digits(&with_value(-3))),
    };
    Some(name)
}

/// Inverse of [`curve_name`]. Subscripts may be given in any order but must be distinct.
pub fn class_of_name(name: &str) -> Result<DivisorClass> {
    let bad = || Error::Parse(format!("unknown curve name {name:?}"));
    let (beta, rest) = match name.strip_prefix('b') {
        Some(r) => (true, r),
        None => (false, name),
    };
    let mut chars = rest.chars();
    let letter = chars.next().ok_or_else(bad)?;
    let body = chars.as_str();
    let parse_digits = |s: &str| -> Result<Vec<usize>> {
        let idx: Vec<usize> = s
            .chars()
            .map(|ch| ch.to_digit(10).map(|d| d as usize).filter(|d| (1..=8).contains(d)).ok_or_else(bad))
            .collect::<Result<_>>()?;
        let mut sorted = idx.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != idx.len() {
            return Err(bad());
        }
        Ok(idx)
    };
    let class = match (letter, beta) {
        ('E', _) => match parse_digits(body)?[..] {
            [i] => e(i),
            _ => return Err(bad()),
        },
        ('L', _) => match parse_digits(body)?[..] {
            [i, j] => line_class(i, j),
            _ => return Err(bad()),
        },
        ('Q', _) => match parse_digits(body)?[..] {
            [i, j, k] => conic_class(i, j, k),
            _ => return Err(bad()),
        },
        ('C', false) => {
            let (a, b) = body.split_once('-').ok_or_else(bad)?;
            match (&parse_digits(a)?[..], &parse_digits(b)?[..]) {
                ([i], [j]) if i != j => cubic_class(*i, *j),
                _ => return Err(bad()),
            }
        }
        _ => return Err(bad()),
    };
    Ok(if beta { bertini_class(&class) } else { class })
}

/// Immutable table of the 240 curves with their pairings and Bertini partners.
#[derive(Debug)]
pub struct CurveTable {
    curves: Vec<ExceptionalCurve>,
    names: Vec<String>,
    index: HashMap<DivisorClass, CurveId>,
    pairing: Vec<i8>,
    bertini: Vec<CurveId>,
}

impl CurveTable {
    pub fn build() -> Self {
        let classes = family_classes();
        let curves: Vec<ExceptionalCurve> = classes
            .iter()
            .enumerate()
            .map(|(id, class)| ExceptionalCurve {
                id,
                class: *class,
                family: Family::from_degree(class.degree()).expect("degree in 0..=6"),
            })
            .collect();
        let index = classes.iter().enumerate().map(|(i, c)| (*c, i)).collect::<HashMap<_, _>>();
        let mut pairing = vec![0i8; CURVE_COUNT * CURVE_COUNT];
        for (a, ca) in classes.iter().enumerate() {
            for (b, cb) in classes.iter().enumerate() {
                pairing[a * CURVE_COUNT + b] = ca.pair(cb) as i8;
            }
        }
        let bertini = classes.iter().map(|c| index[&bertini_class(c)]).collect();
        let names = curves.iter().map(ExceptionalCurve::name).collect();
        CurveTable { curves, names, index, pairing, bertini }
    }

    /// Process-wide shared table.
    pub fn global() -> &'static CurveTable {
        static TABLE: OnceLock<CurveTable> = OnceLock::new();
        TABLE.get_or_init(CurveTable::build)
    }

    pub fn curves(&self) -> &[ExceptionalCurve] {
        &self.curves
    }

    pub fn curve(&self, id: CurveId) -> &ExceptionalCurve {
        &self.curves[id]
    }

    pub fn class(&self, id: CurveId) -> DivisorClass {
        self.curves[id].class
    }

    pub fn id_of(&self, class: &DivisorClass) -> Option<CurveId> {
        self.index.get(class).copied()
    }

    pub fn id_of_name(&self, name: &str) -> Result<CurveId> {
        let class = class_of_name(name)?;
        self.id_of(&class).ok_or(Error::NotACurve(class))
    }

    pub fn name(&self, id: CurveId) -> &str {
        &self.names[id]
    }

    #[inline]
    pub fn pairing(&self, a: CurveId, b: CurveId) -> i64 {
        self.pairing[a * CURVE_COUNT + b] as i64
    }

    pub fn bertini(&self, id: CurveId) -> CurveId {
        self.bertini[id]
    }

    pub fn disjoint_partners(&self, id: CurveId) -> Vec<CurveId> {
        (0..CURVE_COUNT).filter(|&d| d != id && self.pairing(id, d) == 0).collect()
    }

    /// The permutation of curve ids induced by an isometry.
    pub fn permutation_of(&self, m: &LatticeIsometry) -> Result<CurvePermutation> {
        let images = self
            .curves
            .iter()
            .map(|c| {
                let image = m.apply(&c.class);
                self.id_of(&image).ok_or(Error::NotACurve(image))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CurvePermutation { images })
    }
}

/// Action of an isometry on curve ids.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CurvePermutation {
    images: Vec<CurveId>,
}

impl CurvePermutation {
    #[inline]
    pub fn apply(&self, id: CurveId) -> CurveId {
        self.images[id]
    }

    pub fn fixed_curves(&self) -> Vec<CurveId> {
        (0..self.images.len()).filter(|&i| self.images[i] == i).collect()
    }
}

/// All 240 exceptional curves in id order.
pub fn enumerate_curves() -> Vec<ExceptionalCurve> {
    CurveTable::global().curves().to_vec()
}

/// The curve with class `-2K - c`.
pub fn bertini(c: &ExceptionalCurve) -> ExceptionalCurve {
    let table = CurveTable::global();
    *table.curve(table.bertini(c.id))
}

/// Ids of curves meeting `c` with intersection number 0.
pub fn disjoint_partners(c: &ExceptionalCurve) -> Vec<CurveId> {
    CurveTable::global().disjoint_partners(c.id)
}

/// The isometry fixing `L` and permuting `E_1..E_8` by the given cycle string.
pub fn s8_action(perm: &str) -> Result<LatticeIsometry> {
    LatticeIsometry::from_cycles(perm)
}

/// The lattice map `x -> -x + 2 (x.K) K`, realising the Bertini involution on classes.
pub fn bertini_isometry() -> LatticeIsometry {
    let k = DivisorClass::canonical();
    let images: [DivisorClass; RANK] = std::array::from_fn(|i| {
        let x = DivisorClass::basis(i);
        -x + (2 * x.pair(&k)) * k
    });
    LatticeIsometry::from_basis_images(&images).expect("Bertini map is an isometry")
}
