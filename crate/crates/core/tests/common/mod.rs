//! Shared corpus builders and independent oracles for the integration and
//! acceptance suites.
//!
//! The oracles here recompute everything straight off the color matrix by
//! relation composition and exhaustive enumeration; they deliberately avoid
//! the tensor/product machinery they are used to check.

#![allow(dead_code)]

use scheme_core::construct::{
    affine_scheme, cyclic_group_table, cyclotomic_scheme, group_scheme, orbital_scheme,
    quaternion_group_table, PermutationGroupSpec,
};
use scheme_core::scheme::Scheme;

pub fn trivial_scheme(n: usize) -> Scheme {
    let mut m = vec![1u32; n * n];
    for a in 0..n {
        m[a * n + a] = 0;
    }
    Scheme::from_color_matrix(n, &m).unwrap()
}

/// Regular action of Z_5.
pub fn orbital_c5() -> Scheme {
    let spec = PermutationGroupSpec::new(5, vec![vec![1, 2, 3, 4, 0]]).unwrap();
    orbital_scheme(&spec).unwrap()
}

/// Natural action of S_3 (two-transitive).
pub fn orbital_s3() -> Scheme {
    let spec = PermutationGroupSpec::new(3, vec![vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
    orbital_scheme(&spec).unwrap()
}

/// AGL(1, 5) = <x+1, 2x> acting on GF(5) (two-transitive).
pub fn orbital_agl15() -> Scheme {
    let spec =
        PermutationGroupSpec::new(5, vec![vec![1, 2, 3, 4, 0], vec![0, 2, 4, 1, 3]]).unwrap();
    orbital_scheme(&spec).unwrap()
}

/// Dihedral group of the square on 4 points (rank-3 scheme).
pub fn orbital_square() -> Scheme {
    let spec = PermutationGroupSpec::new(4, vec![vec![1, 2, 3, 0], vec![0, 3, 2, 1]]).unwrap();
    orbital_scheme(&spec).unwrap()
}

/// Dihedral group of the octagon: the distance scheme of the 8-cycle,
/// quasi-thin with a non-thin residue.
pub fn orbital_octagon() -> Scheme {
    let spec = PermutationGroupSpec::new(
        8,
        vec![vec![1, 2, 3, 4, 5, 6, 7, 0], vec![0, 7, 6, 5, 4, 3, 2, 1]],
    )
    .unwrap();
    orbital_scheme(&spec).unwrap()
}

/// V ⋊ <σ> for V = GF(2)^3 and the transvection σ(x) = x + ((x & 1) << 2):
/// a group of order 2^4 on 8 points whose orbital scheme is {1,2}-valenced
/// with thin residue E_2.
pub fn orbital_transvection8() -> Scheme {
    let n = 8usize;
    let mut gens: Vec<Vec<usize>> = (0..3)
        .map(|i| (0..n).map(|x| x ^ (1 << i)).collect())
        .collect();
    gens.push((0..n).map(|x| x ^ ((x & 1) << 2)).collect());
    orbital_scheme(&PermutationGroupSpec::new(n, gens).unwrap()).unwrap()
}

/// V ⋊ <σ> for V = GF(2)^6 and σ = I + N with N(e_i) = e_{i+3}, N² = 0 of
/// rank 3: a {1,2}-valenced scheme on 64 points whose thin residue is
/// elementary abelian of rank 3.
pub fn orbital_sigma64() -> Scheme {
    let n = 64usize;
    let mut gens: Vec<Vec<usize>> = (0..6)
        .map(|i| (0..n).map(|x| x ^ (1 << i)).collect())
        .collect();
    gens.push((0..n).map(|x| x ^ ((x & 0b111) << 3)).collect());
    orbital_scheme(&PermutationGroupSpec::new(n, gens).unwrap()).unwrap()
}

/// The desk-scale corpus: everything but the 197-point pseudocyclic scheme.
pub fn desk_corpus() -> Vec<(&'static str, Scheme)> {
    vec![
        ("trivial-4", trivial_scheme(4)),
        ("thin-z6", group_scheme(&cyclic_group_table(6)).unwrap()),
        ("thin-q8", group_scheme(&quaternion_group_table()).unwrap()),
        ("ag-2-3", affine_scheme(2, 3).unwrap()),
        ("ag-2-4", affine_scheme(2, 4).unwrap()),
        ("ag-3-3", affine_scheme(3, 3).unwrap()),
        ("cyclotomic-5-2", cyclotomic_scheme(5, 2).unwrap()),
        ("cyclotomic-13-4", cyclotomic_scheme(13, 4).unwrap()),
        ("cyclotomic-29-14", cyclotomic_scheme(29, 14).unwrap()),
        ("orbital-c5", orbital_c5()),
        ("orbital-s3", orbital_s3()),
        ("orbital-agl15", orbital_agl15()),
        ("orbital-square", orbital_square()),
        ("orbital-octagon", orbital_octagon()),
        ("orbital-transvection8", orbital_transvection8()),
        ("orbital-sigma64", orbital_sigma64()),
    ]
}

pub fn heavy_pseudocyclic() -> Scheme {
    cyclotomic_scheme(197, 98).unwrap()
}

/// Full corpus including the heavier pseudocyclic member.
pub fn full_corpus() -> Vec<(String, Scheme)> {
    let mut corpus: Vec<(String, Scheme)> = desk_corpus()
        .into_iter()
        .map(|(n, x)| (n.to_string(), x))
        .collect();
    corpus.push(("cyclotomic-197-98".to_string(), heavy_pseudocyclic()));
    corpus
}

// ---------------------------------------------------------------------------
// Independent oracles.

/// Complex product by relation composition on the color matrix.
pub fn naive_product(x: &Scheme, r: usize, s: usize) -> Vec<usize> {
    let n = x.n();
    let mut out = vec![false; x.rank()];
    for a in 0..n {
        for g in 0..n {
            if x.color(a, g) != r {
                continue;
            }
            for b in 0..n {
                if x.color(g, b) == s {
                    out[x.color(a, b)] = true;
                }
            }
        }
    }
    (0..x.rank()).filter(|&t| out[t]).collect()
}

/// Intersection number counted directly on a chosen pair of the color `t`.
pub fn naive_intersection_number(x: &Scheme, r: usize, s: usize, t: usize) -> u32 {
    let n = x.n();
    for a in 0..n {
        for b in 0..n {
            if x.color(a, b) == t {
                return (0..n)
                    .filter(|&g| x.color(a, g) == r && x.color(g, b) == s)
                    .count() as u32;
            }
        }
    }
    0
}

/// Linkage decided from the definition alone, with naive products.
pub fn naive_is_linked(x: &Scheme, k: usize, cfg: (usize, usize, usize, usize, usize)) -> bool {
    let (cx, cy, cz, cr, cs) = cfg;
    let d = |c: usize| x.dual(c);
    let prod = |a: usize, b: usize| naive_product(x, a, b);
    let sk: Vec<usize> = (0..x.rank())
        .filter(|&c| x.valency(c) as usize == k)
        .collect();
    let adj = |a: usize, b: usize| prod(d(a), b).len() == k;
    let inter = |l: &[usize], m: &[usize]| {
        l.iter()
            .copied()
            .filter(|c| m.contains(c))
            .collect::<Vec<_>>()
    };
    for &q in &sk {
        if !(adj(q, cx) && adj(q, cy) && adj(q, cz)) {
            continue;
        }
        for u in prod(d(cx), q) {
            for w in prod(d(cz), q) {
                if inter(&prod(d(cx), cz), &prod(u, d(w))) != vec![cr] {
                    continue;
                }
                for v in prod(d(cy), q) {
                    if inter(&prod(d(cz), cy), &prod(w, d(v))) != vec![cs] {
                        continue;
                    }
                    let ts = inter(&prod(d(cx), cy), &prod(u, d(v)));
                    if ts.len() == 1 && prod(cr, cs).contains(&ts[0]) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Desarguesian verdict from the definition alone; returns
/// (verdict, linked count, configuration count).
pub fn naive_desarguesian(x: &Scheme, k: usize) -> (bool, usize, usize) {
    let d = |c: usize| x.dual(c);
    let sk: Vec<usize> = (0..x.rank())
        .filter(|&c| x.valency(c) as usize == k)
        .collect();
    let adj = |a: usize, b: usize| naive_product(x, d(a), b).len() == k;
    let (mut total, mut linked) = (0, 0);
    for &cx in &sk {
        for &cy in &sk {
            for &cz in &sk {
                if !(adj(cx, cz) && adj(cz, cy)) {
                    continue;
                }
                for r in naive_product(x, d(cx), cz) {
                    for s in naive_product(x, d(cz), cy) {
                        total += 1;
                        if naive_is_linked(x, k, (cx, cy, cz, r, s)) {
                            linked += 1;
                        }
                    }
                }
            }
        }
    }
    (linked == total, linked, total)
}

/// Counts color-preserving bijections by running through all n! of them.
/// Only sane for n ≤ 9.
pub fn brute_force_aut_count(x: &Scheme) -> usize {
    let n = x.n();
    assert!(n <= 9, "factorial enumeration");
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count = 0;
    loop {
        if (0..n).all(|a| (0..n).all(|b| x.color(a, b) == x.color(perm[a], perm[b]))) {
            count += 1;
        }
        let Some(i) = (0..n - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
            return count;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

/// `|Ω_{α,β}|` counted directly.
pub fn naive_indistinguishing(x: &Scheme, alpha: usize, beta: usize) -> u32 {
    (0..x.n())
        .filter(|&g| x.color(g, alpha) == x.color(g, beta))
        .count() as u32
}
