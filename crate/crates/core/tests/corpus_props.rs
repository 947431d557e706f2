//! Structural properties of the scheme corpus: tensor identities,
//! normalization, complex product algebra, localized relations, the
//! indistinguishing number, and thin structure.

mod common;

use common::*;
use proptest::prelude::*;
use scheme_core::classify::classify;
use scheme_core::construct::{orbital_scheme, PermutationGroupSpec};
use scheme_core::scheme::Scheme;
use scheme_core::thin::thin_structure;

#[test]
fn tensor_identities_hold_on_the_desk_corpus() {
    for (name, x) in desk_corpus() {
        x.tensor()
            .verify_identities(&x)
            .unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn tensor_matches_naive_counts_on_small_schemes() {
    for (name, x) in desk_corpus() {
        if x.n() > 16 {
            continue;
        }
        let t = x.tensor();
        for r in 0..x.rank() {
            for s in 0..x.rank() {
                for u in 0..x.rank() {
                    assert_eq!(
                        t.c(r, s, u),
                        naive_intersection_number(&x, r, s, u),
                        "{name} at ({r},{s},{u})"
                    );
                }
            }
        }
    }
}

#[test]
fn revalidation_is_idempotent_on_the_corpus() {
    for (name, x) in desk_corpus() {
        let raw: Vec<u32> = x.color_matrix().iter().map(|&c| c as u32).collect();
        let y = Scheme::from_color_matrix(x.n(), &raw).unwrap();
        assert_eq!(x, y, "{name}");
    }
}

#[test]
fn complex_product_is_associative_on_singletons() {
    for (name, x) in desk_corpus() {
        if x.n() > 30 {
            continue;
        }
        let t = x.tensor();
        for a in 0..x.rank() {
            for b in 0..x.rank() {
                let ab = t.complex_product(&[a], &[b]);
                for c in 0..x.rank() {
                    let bc = t.complex_product(&[b], &[c]);
                    let lhs = t.complex_product(&ab, &[c]);
                    let rhs = t.complex_product(&[a], &bc);
                    assert_eq!(lhs, rhs, "{name}: ({a}{b}){c} != {a}({b}{c})");
                }
            }
        }
    }
}

#[test]
fn complex_product_agrees_with_relation_composition() {
    for (name, x) in desk_corpus() {
        if x.n() > 30 {
            continue;
        }
        let t = x.tensor();
        for r in 0..x.rank() {
            for s in 0..x.rank() {
                let lib: Vec<usize> = t.product(r, s).iter().map(|&c| c as usize).collect();
                assert_eq!(lib, naive_product(&x, r, s), "{name} at ({r},{s})");
            }
        }
    }
}

#[test]
fn indistinguishing_number_equals_direct_count_everywhere() {
    for (name, x) in desk_corpus() {
        if x.n() > 50 {
            continue;
        }
        let t = x.tensor();
        for s in 1..x.rank() {
            let by_tensor = t.indistinguishing_number(s);
            for a in 0..x.n() {
                for &b in x.fiber(a, s) {
                    assert_eq!(
                        by_tensor,
                        naive_indistinguishing(&x, a, b as usize),
                        "{name}: c({s}) vs pair ({a},{b})"
                    );
                }
            }
        }
    }
}

#[test]
fn localized_relations_are_matchings_under_the_count_condition() {
    // If every c[x,r]^y' with y' in xr is at most one and the end colors
    // have equal valency, points of αx see at most one r-neighbor in αy.
    for (name, x) in desk_corpus() {
        if x.n() > 30 {
            continue;
        }
        let t = x.tensor();
        for xc in 0..x.rank() {
            for r in 0..x.rank() {
                let prods = t.product(xc, r);
                if !prods.iter().all(|&y| t.c(xc, r, y as usize) <= 1) {
                    continue;
                }
                for &y in prods {
                    let y = y as usize;
                    if x.valency(y) != x.valency(xc) {
                        continue;
                    }
                    for alpha in [0usize, x.n() / 2] {
                        let pairs = x.localized_relation(alpha, r, xc, y);
                        for &a in x.fiber(alpha, xc) {
                            let deg = pairs.iter().filter(|p| p.0 == a as usize).count();
                            assert!(deg <= 1, "{name}: α={alpha} x={xc} r={r} y={y} a={a}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn localized_cross_class_relations_of_the_plane_are_matchings_or_empty() {
    // For three distinct classes of AG(2,3), the localized relation between
    // two point fibers is either empty or a perfect matching of the two
    // 2-point fibers.
    let x = scheme_core::construct::affine_scheme(2, 3).unwrap();
    for alpha in 0..x.n() {
        for xc in 1..x.rank() {
            for y in 1..x.rank() {
                for r in 1..x.rank() {
                    if xc == y || r == xc || r == y {
                        continue;
                    }
                    let pairs = x.localized_relation(alpha, r, xc, y);
                    assert!(
                        pairs.len() == 2 || pairs.is_empty(),
                        "({alpha},{r},{xc},{y})"
                    );
                    if pairs.len() == 2 {
                        assert_ne!(pairs[0].0, pairs[1].0);
                        assert_ne!(pairs[0].1, pairs[1].1);
                    }
                }
            }
        }
    }
}

#[test]
fn localized_relation_outside_the_product_is_empty() {
    let x = scheme_core::construct::affine_scheme(2, 3).unwrap();
    let t = x.tensor();
    for xc in 1..x.rank() {
        for y in 1..x.rank() {
            for r in 0..x.rank() {
                if t.c(x.dual(xc), y, r) == 0 {
                    assert!(x.localized_relation(0, r, xc, y).is_empty());
                }
            }
        }
    }
}

#[test]
fn thin_structure_of_the_transvection_scheme() {
    // Order-16 2-group acting on 8 points: {1,2}-valenced, meta-thin,
    // residue of order 2 (elementary abelian of rank 1).
    let x = orbital_transvection8();
    let p = classify(&x);
    assert_eq!(p.two_valenced, Some(2));
    let ts = thin_structure(&x);
    assert_eq!(ts.thin_radical.len(), 4);
    let g = ts.profile().expect("residue is thin");
    assert_eq!(g.order, 2);
    assert_eq!(g.elementary_abelian_rank, Some(1));

    // Independent check of the residue group structure via its table; the
    // residue contains the identity and is closed under products and duals.
    assert!(ts.thin_residue.contains(&0));
    let t = x.tensor();
    for &a in &ts.thin_residue {
        assert!(ts.thin_residue.contains(&x.dual(a)));
        for &b in &ts.thin_residue {
            let prod = t.product(a, b);
            assert_eq!(prod.len(), 1);
            assert!(ts.thin_residue.contains(&(prod[0] as usize)));
        }
    }
}

#[test]
fn thin_structure_of_the_rank_three_residue_scheme() {
    // 64-point {1,2}-scheme with thin residue E_8 = E_{2^3}.
    let x = orbital_sigma64();
    let p = classify(&x);
    assert_eq!(p.one_p_scheme, Some(2));
    let ts = thin_structure(&x);
    assert_eq!(ts.thin_radical.len(), 8);
    assert_eq!(ts.thin_residue.len(), 8);
    let g = ts.profile().expect("meta-thin by construction");
    assert_eq!(g.order, 8);
    assert_eq!(g.exponent, 2);
    assert!(g.abelian);
    assert_eq!(g.elementary_abelian_rank, Some(3));
}

#[test]
fn octagon_distance_scheme_is_quasi_thin_but_not_meta_thin() {
    let x = orbital_octagon();
    let p = classify(&x);
    assert!(p.quasi_thin);
    assert!(!p.thin.residue_is_thin());
}

#[test]
fn pseudocyclic_schemes_have_constant_indistinguishing_number() {
    for (name, x) in desk_corpus() {
        let p = classify(&x);
        if let Some(k) = p.pseudocyclic {
            let t = x.tensor();
            for s in 1..x.rank() {
                assert_eq!(t.indistinguishing_number(s), k - 1, "{name} at {s}");
            }
        }
    }
}

#[test]
fn quasi_thin_claim_on_eligible_corpus_schemes() {
    // Quasi-thin schemes with more than 24 points and n(s*s) != 2
    // throughout: the valency-2 graph is complete with loops, has at least
    // nine vertices, and s ↦ ss* is injective on it.
    let mut checked = 0;
    for (name, x) in full_corpus() {
        let p = classify(&x);
        if !(p.quasi_thin && p.quasi_thin_condition && x.n() > 24) {
            continue;
        }
        checked += 1;
        let g = scheme_core::saturation::SaturationGraph::build(&x, 2).unwrap();
        let m = g.vertex_count();
        assert!(m >= 9, "{name}: |S_2| = {m}");
        for i in 0..m {
            for j in 0..m {
                assert!(g.adjacent_idx(i, j), "{name}: missing edge {i}-{j}");
            }
        }
        let t = x.tensor();
        for &a in g.vertices() {
            for &b in g.vertices() {
                let eq = t.product(a, x.dual(a)) == t.product(b, x.dual(b));
                assert_eq!(eq, a == b, "{name}: xx* injectivity at ({a},{b})");
            }
        }
    }
    assert!(checked >= 2, "corpus must exercise the claim");
}

#[test]
fn sigma64_is_quasi_thin_but_fails_the_residue_condition() {
    // For its valency-2 colors s, the product s*s is {1, thin} with total
    // valency 2, so the n(s*s) != 2 condition fails while the rank-3
    // residue still puts the scheme in the smooth regime.
    let p = classify(&orbital_sigma64());
    assert!(p.quasi_thin);
    assert!(!p.quasi_thin_condition);
}

// ---------------------------------------------------------------------------
// Property tests over randomized inputs.

/// Builds a permutation of 0..n from an arbitrary byte vector by argsort.
fn perm_from_bytes(bytes: &[u8], n: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by_key(|&i| (bytes.get(i).copied().unwrap_or(0), i));
    let mut perm = vec![0usize; n];
    for (pos, &i) in idx.iter().enumerate() {
        perm[i] = pos;
    }
    perm
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orbital_schemes_of_random_groups_validate(
        degree in 4usize..8,
        seeds in prop::collection::vec(prop::collection::vec(any::<u8>(), 8), 1..3),
    ) {
        let gens: Vec<Vec<usize>> =
            seeds.iter().map(|bytes| perm_from_bytes(bytes, degree)).collect();
        let spec = PermutationGroupSpec::new(degree, gens.clone()).unwrap();
        match orbital_scheme(&spec) {
            Err(_) => {} // intransitive; nothing to check
            Ok(x) => {
                x.tensor().verify_identities(&x).unwrap();
                // The generating permutations act as automorphisms.
                for g in &gens {
                    for a in 0..degree {
                        for b in 0..degree {
                            prop_assert_eq!(x.color(a, b), x.color(g[a], g[b]));
                        }
                    }
                }
                // Normalization is stable under re-validation.
                let raw: Vec<u32> = x.color_matrix().iter().map(|&c| c as u32).collect();
                prop_assert_eq!(&Scheme::from_color_matrix(x.n(), &raw).unwrap(), &x);
            }
        }
    }

    #[test]
    fn normalization_is_invariant_under_color_relabeling(
        seed in prop::collection::vec(any::<u8>(), 5),
    ) {
        // Relabel the colors of AG(2,3) by an arbitrary permutation fixing
        // nothing in particular; re-validation recovers the canonical form.
        let x = scheme_core::construct::affine_scheme(2, 3).unwrap();
        let perm = perm_from_bytes(&seed, x.rank());
        let relabeled: Vec<u32> =
            x.color_matrix().iter().map(|&c| perm[c as usize] as u32).collect();
        let y = Scheme::from_color_matrix(x.n(), &relabeled).unwrap();
        prop_assert_eq!(&y, &x);
    }
}
