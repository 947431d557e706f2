//! Thin radical and thin residue: the group formed by the valency-one colors
//! and its subgroup generated by all products `ss*`.

use crate::scheme::{Color, Scheme};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("thin residue contains the non-thin color {0}; the scheme is not meta-thin")]
pub struct ResidueNotThin(pub Color);

/// Group-theoretic summary of the thin residue when it consists of thin
/// colors only (multiplication of thin colors is single-valued, so the
/// residue then carries a group structure).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupProfile {
    pub order: usize,
    pub exponent: usize,
    pub abelian: bool,
    /// `Some(m)` when the group is elementary abelian of order `p^m`.
    pub elementary_abelian_rank: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThinStructure {
    /// Colors of valency one, ascending. Always contains the identity.
    pub thin_radical: Vec<Color>,
    /// Closure of `∪_s ss*` under complex products, ascending.
    pub thin_residue: Vec<Color>,
    profile: Result<GroupProfile, ResidueNotThin>,
}

impl ThinStructure {
    /// The residue group profile, or the offending color when the residue
    /// escapes the thin radical.
    pub fn profile(&self) -> Result<&GroupProfile, ResidueNotThin> {
        self.profile.as_ref().map_err(|e| e.clone())
    }

    pub fn residue_is_thin(&self) -> bool {
        self.profile.is_ok()
    }
}

pub fn thin_structure(x: &Scheme) -> ThinStructure {
    let t = x.tensor();
    let rank = x.rank();

    let thin_radical: Vec<Color> = (0..rank).filter(|&s| x.is_thin(s)).collect();

    // Seed with every ss*, then close under complex products. The closure
    // cannot grow past `rank` colors, so `rank` rounds always suffice.
    let mut member = vec![false; rank];
    member[0] = true;
    for s in 0..rank {
        for &u in t.product(s, x.dual(s)) {
            member[u as usize] = true;
        }
    }
    for _ in 0..rank {
        let current: Vec<Color> = (0..rank).filter(|&s| member[s]).collect();
        let mut grew = false;
        for &a in &current {
            for &b in &current {
                for &u in t.product(a, b) {
                    if !member[u as usize] {
                        member[u as usize] = true;
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    let thin_residue: Vec<Color> = (0..rank).filter(|&s| member[s]).collect();

    let profile = match thin_residue.iter().find(|&&s| !x.is_thin(s)) {
        Some(&bad) => Err(ResidueNotThin(bad)),
        None => Ok(residue_profile(x, &thin_residue)),
    };

    ThinStructure {
        thin_radical,
        thin_residue,
        profile,
    }
}

/// Builds the multiplication table of a set of thin colors closed under
/// products and duals, and summarizes the resulting group.
fn residue_profile(x: &Scheme, residue: &[Color]) -> GroupProfile {
    let t = x.tensor();
    let order = residue.len();
    let index = |c: Color| residue.binary_search(&c).expect("closed under products");

    let mut table = vec![0usize; order * order];
    for (i, &a) in residue.iter().enumerate() {
        for (j, &b) in residue.iter().enumerate() {
            let prod = t.product(a, b);
            assert_eq!(prod.len(), 1, "thin colors multiply to a single color");
            table[i * order + j] = index(prod[0] as usize);
        }
    }

    let id = index(0);
    let mut abelian = true;
    for i in 0..order {
        for j in 0..i {
            if table[i * order + j] != table[j * order + i] {
                abelian = false;
            }
        }
    }

    let element_order = |i: usize| -> usize {
        let mut acc = i;
        let mut ord = 1;
        while acc != id {
            acc = table[acc * order + i];
            ord += 1;
        }
        ord
    };
    let orders: Vec<usize> = (0..order).map(element_order).collect();
    let exponent = orders.iter().fold(1usize, |acc, &o| lcm(acc, o));

    let elementary_abelian_rank = elementary_rank(order, exponent, abelian, &orders);

    GroupProfile {
        order,
        exponent,
        abelian,
        elementary_abelian_rank,
    }
}

fn elementary_rank(order: usize, exponent: usize, abelian: bool, orders: &[usize]) -> Option<u32> {
    if order == 1 {
        return Some(0);
    }
    if !abelian || !is_prime(exponent) {
        return None;
    }
    let p = exponent;
    if orders.iter().any(|&o| o != 1 && o != p) {
        return None;
    }
    let mut m = 0u32;
    let mut rest = order;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some(m)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

pub(crate) fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
