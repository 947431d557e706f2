//! Constructors for the scheme corpus: orbital schemes of transitive
//! permutation groups, schemes of affine spaces, cyclotomic schemes, and
//! thin schemes of abstract groups.

use crate::fields::{GaloisField, UnsupportedFieldOrder};
use crate::scheme::{Scheme, ValidationError};
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("the generated group is not transitive: point {0} is not reachable from 0")]
    NotTransitive(usize),
    #[error("generator {index} is not a permutation of 0..{degree}: {detail}")]
    InvalidGenerator {
        index: usize,
        degree: usize,
        detail: String,
    },
    #[error(transparent)]
    UnsupportedFieldOrder(#[from] UnsupportedFieldOrder),
    #[error("subgroup index {m} does not divide the order {q} - 1 of the multiplicative group")]
    IndexDoesNotDivide { q: usize, m: usize },
    #[error("affine dimension must be at least 2, got {0}")]
    InvalidDimension(usize),
    #[error("the table is not a group: {0}")]
    NotAGroup(String),
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

/// A permutation group given by generators acting on `0..degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationGroupSpec {
    pub degree: usize,
    /// One image vector per generator.
    pub generators: Vec<Vec<usize>>,
}

impl PermutationGroupSpec {
    pub fn new(degree: usize, generators: Vec<Vec<usize>>) -> Result<Self, ConstructError> {
        for (index, g) in generators.iter().enumerate() {
            if g.len() != degree {
                return Err(ConstructError::InvalidGenerator {
                    index,
                    degree,
                    detail: format!("has {} images", g.len()),
                });
            }
            let mut seen = vec![false; degree];
            for &img in g {
                if img >= degree || seen[img] {
                    return Err(ConstructError::InvalidGenerator {
                        index,
                        degree,
                        detail: format!("image {img} repeats or is out of range"),
                    });
                }
                seen[img] = true;
            }
        }
        Ok(PermutationGroupSpec { degree, generators })
    }

    fn check_transitive(&self) -> Result<(), ConstructError> {
        let mut seen = vec![false; self.degree];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(a) = queue.pop_front() {
            for g in &self.generators {
                if !seen[g[a]] {
                    seen[g[a]] = true;
                    queue.push_back(g[a]);
                }
            }
        }
        match seen.iter().position(|&s| !s) {
            None => Ok(()),
            Some(p) => Err(ConstructError::NotTransitive(p)),
        }
    }
}

/// The scheme whose colors are the orbits of the generated group acting
/// componentwise on ordered pairs.
///
/// Colors are numbered by the smallest pair of each orbit in row-major
/// order, which the normalization in `Scheme::from_color_matrix` preserves.
pub fn orbital_scheme(spec: &PermutationGroupSpec) -> Result<Scheme, ConstructError> {
    spec.check_transitive()?;
    let n = spec.degree;
    let mut color = vec![u32::MAX; n * n];
    let mut next = 0u32;
    for start in 0..n * n {
        if color[start] != u32::MAX {
            continue;
        }
        color[start] = next;
        let mut queue = VecDeque::from([(start / n, start % n)]);
        while let Some((a, b)) = queue.pop_front() {
            for g in &spec.generators {
                let img = g[a] * n + g[b];
                if color[img] == u32::MAX {
                    color[img] = next;
                    queue.push_back((g[a], g[b]));
                }
            }
        }
        next += 1;
    }
    Ok(Scheme::from_color_matrix(n, &color)?)
}

/// The scheme of the affine space AG(d, q): points are vectors of GF(q)^d
/// and each parallel class of lines contributes the color "difference lies
/// in this direction". Directions are indexed by their canonical projective
/// representative (first nonzero coordinate scaled to 1), in lexicographic
/// order.
pub fn affine_scheme(d: usize, q: usize) -> Result<Scheme, ConstructError> {
    if d < 2 {
        return Err(ConstructError::InvalidDimension(d));
    }
    let f = GaloisField::new(q)?;
    let n = match q.checked_pow(d as u32) {
        Some(n) if n <= crate::scheme::MAX_POINTS => n,
        _ => return Err(ValidationError::TooLarge(crate::scheme::MAX_POINTS + 1).into()),
    };

    let coords = |mut p: usize| -> Vec<usize> {
        let mut v = vec![0; d];
        for slot in v.iter_mut() {
            *slot = p % q;
            p /= q;
        }
        v
    };
    let encode = |v: &[usize]| -> usize { v.iter().rev().fold(0, |acc, &c| acc * q + c) };

    // Canonical representative of the direction spanned by a nonzero vector.
    let canonical = |v: &[usize]| -> usize {
        let j = v.iter().position(|&c| c != 0).expect("nonzero vector");
        let scale = f.inv(v[j]);
        let scaled: Vec<usize> = v.iter().map(|&c| f.mul(scale, c)).collect();
        encode(&scaled)
    };

    let mut class_of = vec![usize::MAX; n];
    let mut classes = 0usize;
    for (p, slot) in class_of.iter_mut().enumerate().skip(1) {
        if canonical(&coords(p)) == p {
            *slot = classes;
            classes += 1;
        }
    }
    debug_assert_eq!(classes, (n - 1) / (q - 1).max(1));

    let mut color = vec![0u32; n * n];
    for a in 0..n {
        let va = coords(a);
        for b in 0..n {
            if a == b {
                continue;
            }
            let vb = coords(b);
            let diff: Vec<usize> = vb.iter().zip(&va).map(|(&x, &y)| f.sub(x, y)).collect();
            color[a * n + b] = 1 + class_of[canonical(&diff)] as u32;
        }
    }
    Ok(Scheme::from_color_matrix(n, &color)?)
}

/// The cyclotomic scheme on GF(q) with respect to the index-`m` subgroup of
/// the multiplicative group: pairs are colored by the coset of `β − α`.
pub fn cyclotomic_scheme(q: usize, m: usize) -> Result<Scheme, ConstructError> {
    let f = GaloisField::new(q)?;
    if m == 0 || !(q - 1).is_multiple_of(m) {
        return Err(ConstructError::IndexDoesNotDivide { q, m });
    }
    let g = f.primitive_element();
    let mut dlog = vec![0usize; q];
    let mut acc = 1usize;
    for e in 0..q - 1 {
        dlog[acc] = e;
        acc = f.mul(acc, g);
    }

    let mut color = vec![0u32; q * q];
    for a in 0..q {
        for b in 0..q {
            if a != b {
                let diff = f.sub(b, a);
                color[a * q + b] = 1 + (dlog[diff] % m) as u32;
            }
        }
    }
    Ok(Scheme::from_color_matrix(q, &color)?)
}

/// The thin scheme of a group given by its Cayley table `table[a][b] = a∘b`:
/// the pair `(α, β)` is colored by the element `α⁻¹∘β`.
pub fn group_scheme(table: &[Vec<usize>]) -> Result<Scheme, ConstructError> {
    let n = table.len();
    if n == 0 {
        return Err(ConstructError::NotAGroup("empty table".into()));
    }
    for (a, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(ConstructError::NotAGroup(format!(
                "row {a} has {} entries",
                row.len()
            )));
        }
        if let Some(&bad) = row.iter().find(|&&e| e >= n) {
            return Err(ConstructError::NotAGroup(format!(
                "entry {bad} out of range in row {a}"
            )));
        }
    }

    let id = (0..n)
        .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
        .ok_or_else(|| ConstructError::NotAGroup("no identity element".into()))?;

    let mut inverse = vec![usize::MAX; n];
    for a in 0..n {
        inverse[a] = (0..n)
            .find(|&b| table[a][b] == id && table[b][a] == id)
            .ok_or_else(|| ConstructError::NotAGroup(format!("element {a} has no inverse")))?;
    }

    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    return Err(ConstructError::NotAGroup(format!(
                        "associativity fails at ({a}, {b}, {c})"
                    )));
                }
            }
        }
    }

    let mut color = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            color[a * n + b] = table[inverse[a]][b] as u32;
        }
    }
    Ok(Scheme::from_color_matrix(n, &color)?)
}

/// Cayley table of the cyclic group Z_n.
pub fn cyclic_group_table(n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|a| (0..n).map(|b| (a + b) % n).collect())
        .collect()
}

/// Cayley table of the quaternion group Q_8 with elements ordered
/// `1, -1, i, -i, j, -j, k, -k`.
pub fn quaternion_group_table() -> Vec<Vec<usize>> {
    // (sign, axis) with axes 1, i, j, k; axis products follow the quaternion
    // rules i² = j² = k² = ijk = -1.
    let unit = |e: usize| -> (i32, usize) { (if e.is_multiple_of(2) { 1 } else { -1 }, e / 2) };
    let encode = |sign: i32, axis: usize| -> usize { axis * 2 + usize::from(sign < 0) };
    let axis_mul = |a: usize, b: usize| -> (i32, usize) {
        match (a, b) {
            (0, x) => (1, x),
            (x, 0) => (1, x),
            (x, y) if x == y => (-1, 0),
            (1, 2) => (1, 3),
            (2, 3) => (1, 1),
            (3, 1) => (1, 2),
            (2, 1) => (-1, 3),
            (3, 2) => (-1, 1),
            (1, 3) => (-1, 2),
            _ => unreachable!(),
        }
    };
    (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (sa, xa) = unit(a);
                    let (sb, xb) = unit(b);
                    let (sp, xp) = axis_mul(xa, xb);
                    encode(sa * sb * sp, xp)
                })
                .collect()
        })
        .collect()
}
