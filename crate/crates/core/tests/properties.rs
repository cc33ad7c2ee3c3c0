use nu_core::homology::Descriptor;
use nu_core::nu::nu_of_ordering;
use nu_core::obstruction::{refute, HandleBudget};
use nu_core::sample::{random_composable_pair, random_trace, SampleConfig};
use nu_core::trace::{dualize, replay};
use nu_core::union::check_key_inequality;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Descriptor together with its Poincaré polynomial worked out by hand.
#[derive(Debug, Clone)]
struct Known {
    desc: Descriptor,
    poly: Vec<u64>,
}

fn mul(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn atom() -> impl Strategy<Value = Known> {
    prop_oneof![
        (1usize..6).prop_map(|n| {
            let mut poly = vec![0; n + 1];
            poly[0] = 1;
            poly[n] = 1;
            Known {
                desc: Descriptor::sphere(n),
                poly,
            }
        }),
        (0u64..5).prop_map(|g| Known {
            desc: Descriptor::surface(g),
            poly: vec![1, 2 * g, 1],
        }),
    ]
}

fn known() -> impl Strategy<Value = Known> {
    atom().prop_recursive(3, 8, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| Known {
            desc: Descriptor::product(a.desc, b.desc),
            poly: mul(&a.poly, &b.poly),
        })
    })
}

proptest! {
    #[test]
    fn kunneth_matches_polynomial_product(a in known(), b in known()) {
        let ab = Descriptor::product(a.desc.clone(), b.desc.clone()).betti().unwrap();
        let ba = Descriptor::product(b.desc.clone(), a.desc.clone()).betti().unwrap();
        prop_assert_eq!(&ab.betti, &mul(&a.poly, &b.poly));
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn connected_sum_with_sphere_is_identity(a in known()) {
        let n = a.poly.len() - 1;
        prop_assume!(n >= 2);
        let sum = Descriptor::connected_sum(vec![a.desc.clone(), Descriptor::sphere(n)]);
        prop_assert_eq!(sum.betti().unwrap().betti, a.poly.clone());
        prop_assert!(sum.equivalent(&a.desc));
    }

    #[test]
    fn connected_sum_adds_middle_betti(a in known(), b in known()) {
        let (a, b) = if a.poly.len() >= b.poly.len() { (a, b) } else { (b, a) };
        let n = a.poly.len() - 1;
        prop_assume!(n >= 2);
        // bring b up to dimension n with a sphere factor
        let b = match n - (b.poly.len() - 1) {
            0 => b,
            k => {
                let mut s = vec![0; k + 1];
                s[0] = 1;
                s[k] = 1;
                Known {
                    desc: Descriptor::product(b.desc, Descriptor::sphere(k)),
                    poly: mul(&b.poly, &s),
                }
            }
        };
        let sum = Descriptor::connected_sum(vec![a.desc.clone(), b.desc.clone()]).betti().unwrap();
        for k in 1..n {
            prop_assert_eq!(sum.betti[k], a.poly[k] + b.poly[k]);
        }
        prop_assert_eq!(sum.total(), a.poly.iter().sum::<u64>() + b.poly.iter().sum::<u64>() - 2);
    }

    #[test]
    fn three_dimensional_values_are_even(seed in any::<u64>()) {
        let d = random_trace(&mut ChaCha8Rng::seed_from_u64(seed), &SampleConfig::default());
        let ev = nu_of_ordering(&d).unwrap();
        prop_assert!(ev.e.iter().all(|e| e % 2 == 0));
        prop_assert_eq!(ev.nu % 2, 0);
    }

    #[test]
    fn dual_is_an_involution_on_states(seed in any::<u64>()) {
        let d = random_trace(&mut ChaCha8Rng::seed_from_u64(seed), &SampleConfig::default());
        let dual = dualize(&d).unwrap();
        let twice = dualize(&dual).unwrap();
        let ms = |x| replay(x).unwrap().iter().map(|s| s.descriptor_multiset()).collect::<Vec<_>>();
        let mut rev = ms(&d);
        rev.reverse();
        prop_assert_eq!(ms(&dual), rev);
        prop_assert_eq!(ms(&twice), ms(&d));
        let idx: Vec<usize> = twice.handles.iter().map(|h| h.index).collect();
        let orig: Vec<usize> = d.handles.iter().map(|h| h.index).collect();
        prop_assert_eq!(idx, orig);
    }

    #[test]
    fn union_inequality_on_random_pairs(seed in any::<u64>()) {
        let (m, n, g) = random_composable_pair(&mut ChaCha8Rng::seed_from_u64(seed), &SampleConfig::default());
        let r = check_key_inequality(&m, &n, &g).unwrap();
        prop_assert!(r.holds, "{:?}", r);
        prop_assert!(r.case_bound_holds, "{:?}", r);
    }

    #[test]
    fn refute_is_monotone(l in 0u64..20, z in 0u64..20, h_max in 0u64..50, h_w in 0u64..2000, extra in 0u64..500) {
        let b = HandleBudget { h_max, l, z };
        if !refute(b, h_w).decomposable_possible {
            prop_assert!(!refute(b, h_w + extra).decomposable_possible);
        }
    }
}
