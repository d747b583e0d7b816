mod common;

use common::*;
use eqk_core::kinv::uniquely_divisible;
use eqk_core::linalg::lr_extension_feasible;
use eqk_core::rmod::{tensor_zp, tor1_zp};
use eqk_core::{Partition, ZpModule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn zp(p: u64, rank: usize, exps: &[u32]) -> ZpModule {
    ZpModule::new(p, rank, Partition::from_unsorted(exps.to_vec())).unwrap()
}

#[test]
fn local_cokernel_reads_diagonal_presentations() {
    let m = IntPresentation::diagonal(3, 2, &[1, 3]).local_module(3);
    assert_eq!(m, zp(3, 2, &[3, 1]));
    // units away from 3 disappear
    let m = local_cokernel(3, 2, &[vec![2, 0], vec![0, 9]]);
    assert_eq!(m, zp(3, 0, &[2]));
}

#[test]
fn finite_group_types_are_recovered() {
    let g = FiniteGroup::with_addition_table(2, &[2, 1]);
    let subgroups = g.subgroups();
    // Z/4 + Z/2 has 8 subgroups
    assert_eq!(subgroups.len(), 8);
    let whole = subgroups.iter().find(|h| h.len() == 8).unwrap();
    assert_eq!(g.subgroup_type(whole).parts(), &[2, 1]);
    assert!(g.quotient_type(whole).is_empty());
}

#[test]
fn tensor_and_tor_match_presentation_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut pairs = 0;
    for p in [2u64, 3] {
        let mut modules = Vec::new();
        for rank in 0..=2usize {
            for t in small_torsion_types() {
                modules.push((rank, t));
            }
        }
        for (ra, ta) in &modules {
            for (rb, tb) in &modules {
                let a = zp(p, *ra, ta);
                let b = zp(p, *rb, tb);
                let mut pa = IntPresentation::diagonal(p, *ra, ta);
                let mut pb = IntPresentation::diagonal(p, *rb, tb);
                pa.scramble(&mut rng);
                pb.scramble(&mut rng);
                assert_eq!(pa.local_module(p), a, "scrambling changed {a}");
                let tensor = pa.tensor(&pb).local_module(p);
                assert_eq!(tensor_zp(&a, &b).unwrap(), tensor, "{a} (x) {b}");
                assert_eq!(
                    tor1_zp(&a, &b).unwrap(),
                    tor_oracle(p, &pa, tb),
                    "Tor({a}, {b})"
                );
                pairs += 1;
            }
        }
    }
    assert!(pairs >= 400, "{pairs}");
}

#[test]
fn lr_feasibility_matches_subgroup_enumeration() {
    for p in [2u64, 3] {
        for n in 0..=4 {
            for lambda in Partition::all_of_size(n) {
                let realized = realized_extensions(p, &lambda);
                for k in 0..=n {
                    for mu in Partition::all_of_size(k) {
                        for nu in Partition::all_of_size(n - k) {
                            let expected =
                                realized.contains(&(mu.parts().to_vec(), nu.parts().to_vec()));
                            assert_eq!(
                                lr_extension_feasible(&lambda, &mu, &nu),
                                expected,
                                "p = {p}, {lambda:?} from {mu:?} by {nu:?}"
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn unique_divisibility_matches_minor_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut invertible = 0;
    for _ in 0..100 {
        let n: usize = rng.gen_range(1..=3);
        let k = rng.gen_range(n.saturating_sub(1)..=n + 1);
        let rels = random_relations(&mut rng, n, k);
        let q = [2i64, 3, 5, 7][rng.gen_range(0..4)];
        let group = presentation(n, &rels).normal_form();
        let expected = multiplication_invertible(q, n, &rels);
        invertible += usize::from(expected);
        assert_eq!(
            uniquely_divisible(&group, q as u64),
            expected,
            "{group}, q = {q}"
        );
    }
    // both outcomes occur
    assert!(invertible > 0 && invertible < 100, "{invertible}");
}
