//! Rationality and minimality tests for a surface described by two commuting subgroups of
//! `W(E8)`: `G`, the automorphisms, and `Gamma`, the image of the Galois group.
//!
//! A class is "defined over the base field" when every element of `Gamma` fixes it.
//! Each test either finds nothing or returns a [`Witness`] that [`Witness::replay`]
//! re-checks from scratch. Rational verdicts are conditional on the surface having the
//! rational points the lattice cannot see.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::curves::{CurveId, CurvePermutation, CurveTable};
use crate::error::{Error, Result};
use crate::lattice::{fixed_rank, DivisorClass, GroupSpec, LatticeIsometry};
use crate::stars::{classify_pair, invariant_stars_of, ActionKind, Census, PairType, StarConfiguration, StarTable};
use crate::weyl::{carter_type_order3, commuting_order3_candidates, element_order, CarterType3, DEFAULT_ORDER_CAP};

/// Automorphism group `G` and Galois image `Gamma`; their generators commute pairwise.
#[derive(Clone, Debug)]
pub struct ActionSetup {
    g_group: GroupSpec,
    gamma_group: GroupSpec,
}

impl ActionSetup {
    pub fn new(g_group: GroupSpec, gamma_group: GroupSpec) -> Result<Self> {
        for (g_index, g) in g_group.generators.iter().enumerate() {
            for (gamma_index, gamma) in gamma_group.generators.iter().enumerate() {
                if !g.commutes_with(gamma) {
                    return Err(Error::NonCommuting { g_index, gamma_index });
                }
            }
        }
        Ok(ActionSetup { g_group, gamma_group })
    }

    /// `G` trivial.
    pub fn galois_only(gamma_group: GroupSpec) -> Self {
        ActionSetup { g_group: GroupSpec::trivial(), gamma_group }
    }

    pub fn g_group(&self) -> &GroupSpec {
        &self.g_group
    }

    pub fn gamma_group(&self) -> &GroupSpec {
        &self.gamma_group
    }

    pub fn combined(&self) -> GroupSpec {
        self.g_group.join(&self.gamma_group)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Rule {
    /// Two asynchronized stars whose curves are all fixed by `Gamma`.
    RationalTwoStars,
    /// Fixed curves `A, B, C` with `A.B = B.C = 1`, `A.C = 0`.
    RationalTriple,
    /// `Gamma` contains an order-3 element of type `A2^3` or `A2^4`.
    NotRationalCarter,
    /// An order-3 element of `Gamma` acts faithfully on three of its invariant stars.
    NotRationalStars,
    /// An even-order element of `Gamma` acts on an invariant star by `H -> H_{i+3}`.
    NotRationalEven,
    /// Four pairwise asynchronized invariant stars, each moved by an order-3 element of `G`.
    MinimalFourStars,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::RationalTwoStars => "rational-two-stars",
            Rule::RationalTriple => "rational-triple",
            Rule::NotRationalCarter => "not-rational-carter",
            Rule::NotRationalStars => "not-rational-stars",
            Rule::NotRationalEven => "not-rational-even",
            Rule::MinimalFourStars => "minimal-four-stars",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The data that triggered a rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub rule: Rule,
    pub elements: Vec<LatticeIsometry>,
    pub curves: Vec<CurveId>,
    pub stars: Vec<StarConfiguration>,
}

impl Witness {
    fn new(rule: Rule) -> Self {
        Witness { rule, elements: Vec::new(), curves: Vec::new(), stars: Vec::new() }
    }

    /// Re-checks the rule's postcondition against the setup without reusing any search state.
    pub fn replay(&self, setup: &ActionSetup, cap: usize) -> Result<()> {
        let table = CurveTable::global();
        let fail = |msg: String| Err(Error::InvariantViolation(format!("{} witness: {msg}", self.rule)));
        let gamma = setup.gamma_group();
        let gamma_fixes = |c: CurveId| gamma.generators.iter().all(|m| m.apply(&table.class(c)) == table.class(c));
        match self.rule {
            Rule::RationalTwoStars => {
                let [a, b] = self.stars[..] else { return fail("needs two stars".into()) };
                if !a.curves().iter().chain(b.curves()).all(|&c| gamma_fixes(c)) {
                    return fail("a star curve is moved by Gamma".into());
                }
                if classify_pair(table, &a, &b)? != PairType::Asynchronized {
                    return fail("stars are not asynchronized".into());
                }
            }
            Rule::RationalTriple => {
                let [a, b, c] = self.curves[..] else { return fail("needs three curves".into()) };
                if !self.curves.iter().all(|&x| gamma_fixes(x)) {
                    return fail("a curve is moved by Gamma".into());
                }
                let p = |x, y| table.pairing(x, y);
                if (p(a, b), p(b, c), p(a, c)) != (1, 1, 0) {
                    return fail(format!("pairings are {:?}", (p(a, b), p(b, c), p(a, c))));
                }
                let d = table.class(a) + table.class(b) + table.class(c);
                let k = DivisorClass::canonical();
                if d.square() != 1 || d.pair(&k) != -3 {
                    return fail(format!("D^2 = {}, D.K = {}", d.square(), d.pair(&k)));
                }
                // h^0(D) = D.(D - K)/2 + 1
                if (d.square() - d.pair(&k)) / 2 + 1 != 3 {
                    return fail("linear system is not a net".into());
                }
            }
            Rule::NotRationalCarter => {
                let [g] = &self.elements[..] else { return fail("needs one element".into()) };
                require_member(g, gamma, cap)?;
                let t = carter_type_order3(g)?;
                if !matches!(t, CarterType3::A2x3 | CarterType3::A2x4) {
                    return fail(format!("element has type {t}"));
                }
            }
            Rule::NotRationalStars => {
                let [g] = &self.elements[..] else { return fail("needs one element".into()) };
                require_member(g, gamma, cap)?;
                if element_order(g, DEFAULT_ORDER_CAP)? != 3 || self.stars.len() < 3 {
                    return fail("needs an order-3 element and three stars".into());
                }
                let perm = table.permutation_of(g)?;
                for s in &self.stars {
                    if s.map(&perm) != *s || s.curves().iter().all(|&c| perm.apply(c) == c) {
                        return fail(format!("{} is not moved faithfully", s.to_text(table)));
                    }
                }
            }
            Rule::NotRationalEven => {
                let [g] = &self.elements[..] else { return fail("needs one element".into()) };
                let [s] = self.stars[..] else { return fail("needs one star".into()) };
                require_member(g, gamma, cap)?;
                if element_order(g, DEFAULT_ORDER_CAP)? % 2 != 0 {
                    return fail("element has odd order".into());
                }
                let perm = table.permutation_of(g)?;
                if s.map(&perm) != s || !s.curves().iter().all(|&h| table.pairing(h, perm.apply(h)) == 3) {
                    return fail("element does not act antipodally on the star".into());
                }
            }
            Rule::MinimalFourStars => {
                if self.stars.len() != 4 || self.elements.len() != 4 {
                    return fail("needs four stars and four elements".into());
                }
                let combined = setup.combined();
                let perms = combined.generators.iter().map(|m| table.permutation_of(m)).collect::<Result<Vec<_>>>()?;
                for (s, g) in self.stars.iter().zip(&self.elements) {
                    if perms.iter().any(|p| s.map(p) != *s) {
                        return fail(format!("{} is not invariant", s.to_text(table)));
                    }
                    require_member(g, setup.g_group(), cap)?;
                    if element_order(g, DEFAULT_ORDER_CAP)? != 3 {
                        return fail("element of G does not have order 3".into());
                    }
                    let perm = table.permutation_of(g)?;
                    if s.curves().iter().all(|&c| perm.apply(c) == c) {
                        return fail(format!("{} is fixed pointwise", s.to_text(table)));
                    }
                }
                for i in 0..4 {
                    for j in i + 1..4 {
                        if classify_pair(table, &self.stars[i], &self.stars[j])? != PairType::Asynchronized {
                            return fail(format!("stars {i} and {j} are not asynchronized"));
                        }
                    }
                }
                let rank = fixed_rank(&combined);
                if rank != 1 {
                    return fail(format!("invariant rank is {rank}, expected 1"));
                }
            }
        }
        Ok(())
    }
}

fn require_member(g: &LatticeIsometry, group: &GroupSpec, cap: usize) -> Result<()> {
    if group.closure(cap)?.contains(g) {
        Ok(())
    } else {
        Err(Error::InvariantViolation(format!("witness element is not in {}", group.label)))
    }
}

fn closure_with_perms(group: &GroupSpec, cap: usize) -> Result<Vec<(LatticeIsometry, CurvePermutation)>> {
    let table = CurveTable::global();
    group
        .closure(cap)?
        .into_iter()
        .map(|m| {
            let perm = table.permutation_of(&m)?;
            Ok((m, perm))
        })
        .collect()
}

/// Curves fixed by every generator (equivalently, by the whole group).
pub fn fixed_curves(group: &GroupSpec) -> Result<Vec<CurveId>> {
    let table = CurveTable::global();
    let perms = group.generators.iter().map(|m| table.permutation_of(m)).collect::<Result<Vec<_>>>()?;
    Ok((0..crate::curves::CURVE_COUNT).filter(|&c| perms.iter().all(|p| p.apply(c) == c)).collect())
}

pub fn check_not_rational_carter(gamma: &GroupSpec, cap: usize) -> Result<Option<Witness>> {
    for m in gamma.closure(cap)? {
        if element_order(&m, DEFAULT_ORDER_CAP)? != 3 {
            continue;
        }
        if matches!(carter_type_order3(&m)?, CarterType3::A2x3 | CarterType3::A2x4) {
            let mut w = Witness::new(Rule::NotRationalCarter);
            w.elements.push(m);
            return Ok(Some(w));
        }
    }
    Ok(None)
}

pub fn check_not_rational_stars(gamma: &GroupSpec, cap: usize) -> Result<Option<Witness>> {
    for (m, perm) in closure_with_perms(gamma, cap)? {
        if element_order(&m, DEFAULT_ORDER_CAP)? != 3 {
            continue;
        }
        let faithful: Vec<StarConfiguration> =
            invariant_stars_of(&perm).into_iter().filter(|a| a.kind == ActionKind::Faithful).map(|a| a.star).collect();
        if faithful.len() >= 3 {
            let mut w = Witness::new(Rule::NotRationalStars);
            w.elements.push(m);
            w.stars.extend_from_slice(&faithful[..3]);
            return Ok(Some(w));
        }
    }
    Ok(None)
}

pub fn check_not_rational_even(gamma: &GroupSpec, cap: usize) -> Result<Option<Witness>> {
    let table = CurveTable::global();
    for (m, perm) in closure_with_perms(gamma, cap)? {
        if element_order(&m, DEFAULT_ORDER_CAP)? % 2 != 0 {
            continue;
        }
        let hit = invariant_stars_of(&perm).into_iter().find(|a| {
            a.kind == ActionKind::Faithful && a.star.curves().iter().all(|&h| table.pairing(h, perm.apply(h)) == 3)
        });
        if let Some(action) = hit {
            let mut w = Witness::new(Rule::NotRationalEven);
            w.elements.push(m);
            w.stars.push(action.star);
            return Ok(Some(w));
        }
    }
    Ok(None)
}

pub fn check_rational_triple(gamma: &GroupSpec, cap: usize) -> Result<Option<Witness>> {
    gamma.closure(cap)?;
    let table = CurveTable::global();
    let fixed = fixed_curves(gamma)?;
    for &a in &fixed {
        for &b in fixed.iter().filter(|&&b| table.pairing(a, b) == 1) {
            if let Some(&c) = fixed.iter().find(|&&c| table.pairing(b, c) == 1 && table.pairing(a, c) == 0) {
                let mut w = Witness::new(Rule::RationalTriple);
                w.curves = vec![a, b, c];
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// Stars all of whose curves are fixed by the group.
pub fn pointwise_fixed_stars(group: &GroupSpec) -> Result<Vec<StarConfiguration>> {
    let fixed = fixed_curves(group)?;
    let mut is_fixed = vec![false; crate::curves::CURVE_COUNT];
    for c in fixed {
        is_fixed[c] = true;
    }
    Ok(StarTable::global().stars().iter().filter(|s| s.curves().iter().all(|&c| is_fixed[c])).copied().collect())
}

pub fn check_rational_two_stars(gamma: &GroupSpec, cap: usize) -> Result<Option<Witness>> {
    gamma.closure(cap)?;
    let table = CurveTable::global();
    let stars = pointwise_fixed_stars(gamma)?;
    for (i, a) in stars.iter().enumerate() {
        for b in &stars[i + 1..] {
            if matches!(classify_pair(table, a, b), Ok(PairType::Asynchronized)) {
                let mut w = Witness::new(Rule::RationalTwoStars);
                w.stars = vec![*a, *b];
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// Looks for four pairwise asynchronized stars invariant under `<G, Gamma>`, each moved by
/// an order-3 element of `G`. A certificate forces the invariant rank of `<G, Gamma>` to be
/// 1; this is checked directly and a mismatch is reported as an invariant violation.
pub fn check_minimal_four_stars(setup: &ActionSetup, cap: usize) -> Result<Option<Witness>> {
    let table = CurveTable::global();
    let combined = setup.combined();
    combined.closure(cap)?;
    let combined_perms = combined.generators.iter().map(|m| table.permutation_of(m)).collect::<Result<Vec<_>>>()?;
    let order3: Vec<(LatticeIsometry, CurvePermutation)> = closure_with_perms(setup.g_group(), cap)?
        .into_iter()
        .filter(|(m, _)| element_order(m, DEFAULT_ORDER_CAP) == Ok(3))
        .collect();

    let candidates: Vec<(StarConfiguration, LatticeIsometry)> = StarTable::global()
        .stars()
        .iter()
        .filter(|s| combined_perms.iter().all(|p| s.map(p) == **s))
        .filter_map(|s| {
            order3.iter().find(|(_, perm)| s.curves().iter().any(|&c| perm.apply(c) != c)).map(|(m, _)| (*s, m.clone()))
        })
        .collect();

    let n = candidates.len();
    let asynchronized: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    i != j
                        && matches!(
                            classify_pair(table, &candidates[i].0, &candidates[j].0),
                            Ok(PairType::Asynchronized)
                        )
                })
                .collect()
        })
        .collect();

    let Some(clique) = find_clique(&asynchronized, 4) else {
        return Ok(None);
    };
    let rank = fixed_rank(&combined);
    if rank != 1 {
        return Err(Error::InvariantViolation(format!(
            "four-star certificate found but the invariant rank of {} is {rank}",
            combined.label
        )));
    }
    let mut w = Witness::new(Rule::MinimalFourStars);
    for i in clique {
        w.stars.push(candidates[i].0);
        w.elements.push(candidates[i].1.clone());
    }
    Ok(Some(w))
}

/// First clique of the given size in index order.
fn find_clique(adjacent: &[Vec<bool>], size: usize) -> Option<Vec<usize>> {
    fn extend(adjacent: &[Vec<bool>], size: usize, start: usize, current: &mut Vec<usize>) -> bool {
        if current.len() == size {
            return true;
        }
        for v in start..adjacent.len() {
            if current.iter().all(|&u| adjacent[u][v]) {
                current.push(v);
                if extend(adjacent, size, v + 1, current) {
                    return true;
                }
                current.pop();
            }
        }
        false
    }
    let mut current = Vec::new();
    extend(adjacent, size, 0, &mut current).then_some(current)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Verdict {
    Rational,
    NotRational,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Rational => "Rational",
            Verdict::NotRational => "NotRational",
            Verdict::Inconclusive => "Inconclusive",
        };
        f.write_str(s)
    }
}

/// Invariant ranks of `G`, `Gamma` and `<G, Gamma>`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Ranks {
    #[serde(rename = "G")]
    pub g: usize,
    #[serde(rename = "Gamma")]
    pub gamma: usize,
    pub combined: usize,
}

#[derive(Clone, Debug)]
pub struct RationalityVerdict {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub ranks: Ranks,
    pub minimality: Option<Witness>,
}

/// Applies the rational tests first, then the non-rational ones; the first hit decides.
pub fn rationality_report(setup: &ActionSetup, cap: usize) -> Result<RationalityVerdict> {
    let gamma = setup.gamma_group();
    type Check = fn(&GroupSpec, usize) -> Result<Option<Witness>>;
    let checks: [(Verdict, Check); 5] = [
        (Verdict::Rational, check_rational_two_stars),
        (Verdict::Rational, check_rational_triple),
        (Verdict::NotRational, check_not_rational_carter),
        (Verdict::NotRational, check_not_rational_stars),
        (Verdict::NotRational, check_not_rational_even),
    ];
    let mut verdict = Verdict::Inconclusive;
    let mut witness = None;
    for (v, check) in checks {
        if let Some(w) = check(gamma, cap)? {
            verdict = v;
            witness = Some(w);
            break;
        }
    }
    let ranks =
        Ranks { g: fixed_rank(setup.g_group()), gamma: fixed_rank(gamma), combined: fixed_rank(&setup.combined()) };
    let minimality = check_minimal_four_stars(setup, cap)?;
    Ok(RationalityVerdict { verdict, witness, ranks, minimality })
}

/// An order-3 element commuting with `g` that moves one of the curves fixed by `g`.
/// Meant for `g` of type `A2^3`, where such an element makes `<g, h>` minimal.
pub fn partner_moving_fixed_curve(g: &LatticeIsometry) -> Result<Option<LatticeIsometry>> {
    let table = CurveTable::global();
    let fixed = table.permutation_of(g)?.fixed_curves();
    for h in commuting_order3_candidates(g) {
        let perm = table.permutation_of(&h)?;
        if fixed.iter().any(|&c| perm.apply(c) != c) {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

/// An order-3 element commuting with `g` that preserves every star fixed pointwise by `g`
/// and moves the curves of each. Meant for `g` of type `A2^2`.
pub fn partner_faithful_on_fixed_stars(g: &LatticeIsometry) -> Result<Option<LatticeIsometry>> {
    let table = CurveTable::global();
    let fixed_stars = Census::of(g)?.trivial();
    if fixed_stars.is_empty() {
        return Ok(None);
    }
    for h in commuting_order3_candidates(g) {
        let perm = table.permutation_of(&h)?;
        let faithful_on_all =
            fixed_stars.iter().all(|s| s.map(&perm) == *s && s.curves().iter().any(|&c| perm.apply(c) != c));
        if faithful_on_all {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

/// JSON element form: cycle notation for permutations, the matrix otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementReport {
    Permutation(String),
    Matrix(Vec<Vec<i64>>),
}

impl From<&LatticeIsometry> for ElementReport {
    fn from(m: &LatticeIsometry) -> Self {
        match m.as_permutation() {
            Some(p) => ElementReport::Permutation(p.to_cycle_string()),
            None => ElementReport::Matrix(m.matrix().iter().map(|r| r.to_vec()).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub rule: String,
    pub elements: Vec<ElementReport>,
    pub curves: Vec<String>,
    pub stars: Vec<String>,
}

impl From<&Witness> for WitnessReport {
    fn from(w: &Witness) -> Self {
        let table = CurveTable::global();
        WitnessReport {
            rule: w.rule.name().to_string(),
            elements: w.elements.iter().map(ElementReport::from).collect(),
            curves: w.curves.iter().map(|&c| table.name(c).to_string()).collect(),
            stars: w.stars.iter().map(|s| s.to_text(table)).collect(),
        }
    }
}

/// JSON document for a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub verdict: Verdict,
    pub rule: Option<String>,
    pub witness: Option<WitnessReport>,
    pub ranks: Ranks,
    pub minimality: Option<WitnessReport>,
}

impl From<&RationalityVerdict> for VerdictReport {
    fn from(v: &RationalityVerdict) -> Self {
        VerdictReport {
            verdict: v.verdict,
            rule: v.witness.as_ref().map(|w| w.rule.name().to_string()),
            witness: v.witness.as_ref().map(WitnessReport::from),
            ranks: v.ranks,
            minimality: v.minimality.as_ref().map(WitnessReport::from),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::bertini_isometry;
    use crate::lattice::DEFAULT_CLOSURE_CAP;
    use crate::weyl::{reflection_of, representative_order3};

    const CAP: usize = DEFAULT_CLOSURE_CAP;

    fn rep(t: CarterType3) -> GroupSpec {
        GroupSpec::cyclic(t.to_string(), representative_order3(t))
    }

    fn names(w: &Witness) -> Vec<&'static str> {
        w.curves.iter().map(|&c| CurveTable::global().name(c)).collect()
    }

    #[test]
    fn carter_rule() {
        let w = check_not_rational_carter(&rep(CarterType3::A2x4), CAP).unwrap().unwrap();
        assert_eq!(w.elements[0], representative_order3(CarterType3::A2x4));
        assert!(check_not_rational_carter(&rep(CarterType3::A2), CAP).unwrap().is_none());
        assert!(check_not_rational_carter(&GroupSpec::trivial(), CAP).unwrap().is_none());
    }

    #[test]
    fn star_rule_agrees_with_carter_rule() {
        for t in CarterType3::ALL {
            let by_stars = check_not_rational_stars(&rep(t), CAP).unwrap().is_some();
            let by_type = check_not_rational_carter(&rep(t), CAP).unwrap().is_some();
            assert_eq!(by_stars, by_type, "{t}");
        }
        assert!(check_not_rational_stars(&rep(CarterType3::A2x3), CAP).unwrap().is_some());
        assert!(check_not_rational_stars(&rep(CarterType3::A2x2), CAP).unwrap().is_none());
    }

    #[test]
    fn even_rule() {
        let beta = GroupSpec::cyclic("beta", bertini_isometry());
        let w = check_not_rational_even(&beta, CAP).unwrap().unwrap();
        w.replay(&ActionSetup::galois_only(beta.clone()), CAP).unwrap();
        let swap = GroupSpec::cyclic(
            "s",
            reflection_of(&(DivisorClass::exceptional(1) - DivisorClass::exceptional(2))).unwrap(),
        );
        assert!(check_not_rational_even(&swap, CAP).unwrap().is_none());
        assert!(check_not_rational_even(&GroupSpec::trivial(), CAP).unwrap().is_none());
    }

    #[test]
    fn triple_rule() {
        let w = check_rational_triple(&GroupSpec::trivial(), CAP).unwrap().unwrap();
        let table = CurveTable::global();
        let [a, b, c] = w.curves[..] else { panic!() };
        assert_eq!((table.pairing(a, b), table.pairing(b, c), table.pairing(a, c)), (1, 1, 0));
        w.replay(&ActionSetup::galois_only(GroupSpec::trivial()), CAP).unwrap();
        assert!(check_rational_triple(&rep(CarterType3::A2x4), CAP).unwrap().is_none());
        assert!(check_rational_triple(&rep(CarterType3::A2x3), CAP).unwrap().is_none());
    }

    #[test]
    fn the_e1_l12_e2_triple_qualifies() {
        let table = CurveTable::global();
        let [e1, l12, e2] = ["E1", "L12", "E2"].map(|n| table.id_of_name(n).unwrap());
        let w = Witness { rule: Rule::RationalTriple, elements: vec![], curves: vec![e1, l12, e2], stars: vec![] };
        w.replay(&ActionSetup::galois_only(GroupSpec::trivial()), CAP).unwrap();
        assert_eq!(names(&w), ["E1", "L12", "E2"]);
    }

    #[test]
    fn two_star_rule() {
        assert!(check_rational_two_stars(&GroupSpec::trivial(), CAP).unwrap().is_some());
        assert!(check_rational_two_stars(&rep(CarterType3::A2x3), CAP).unwrap().is_none());
        let w = check_rational_two_stars(&rep(CarterType3::A2x2), CAP).unwrap().unwrap();
        w.replay(&ActionSetup::galois_only(rep(CarterType3::A2x2)), CAP).unwrap();
    }

    #[test]
    fn non_commuting_setup_is_rejected() {
        let g = GroupSpec::cyclic("a", LatticeIsometry::from_cycles("(1 2)").unwrap());
        let gamma = GroupSpec::cyclic("b", LatticeIsometry::from_cycles("(2 3)").unwrap());
        assert_eq!(ActionSetup::new(g, gamma).unwrap_err(), Error::NonCommuting { g_index: 0, gamma_index: 0 });
    }

    #[test]
    fn four_stars_for_a2x4() {
        let setup = ActionSetup::new(rep(CarterType3::A2x4), GroupSpec::trivial()).unwrap();
        let w = check_minimal_four_stars(&setup, CAP).unwrap().unwrap();
        assert_eq!(w.stars.len(), 4);
        w.replay(&setup, CAP).unwrap();
        let none = ActionSetup::new(rep(CarterType3::A2), GroupSpec::trivial()).unwrap();
        assert!(check_minimal_four_stars(&none, CAP).unwrap().is_none());
    }

    #[test]
    fn tampered_witnesses_fail_replay() {
        let setup = ActionSetup::galois_only(GroupSpec::trivial());
        let mut w = check_rational_triple(&GroupSpec::trivial(), CAP).unwrap().unwrap();
        w.curves.swap(0, 1);
        assert!(w.replay(&setup, CAP).is_err());

        let a2 = ActionSetup::galois_only(rep(CarterType3::A2));
        let fake = Witness {
            rule: Rule::NotRationalCarter,
            elements: vec![representative_order3(CarterType3::A2)],
            curves: vec![],
            stars: vec![],
        };
        assert!(fake.replay(&a2, CAP).is_err());
        let outsider = Witness { elements: vec![representative_order3(CarterType3::A2x4)], ..fake };
        assert!(outsider.replay(&a2, CAP).is_err());
    }

    #[test]
    fn report_json_shape() {
        let setup = ActionSetup::galois_only(rep(CarterType3::A2x4));
        let verdict = rationality_report(&setup, CAP).unwrap();
        assert_eq!(verdict.verdict, Verdict::NotRational);
        let json = serde_json::to_value(VerdictReport::from(&verdict)).unwrap();
        assert_eq!(json["verdict"], "NotRational");
        assert_eq!(json["rule"], "not-rational-carter");
        assert_eq!(json["ranks"]["Gamma"], 1);
        assert_eq!(json["ranks"]["G"], 9);
        assert!(json["witness"]["elements"][0].is_array());
    }
}
