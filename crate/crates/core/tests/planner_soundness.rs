use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symcone::chambers::{chamber_point, corner_point, ChamberDescriptor};
use symcone::models::{build_kk_model, kk_interior_class};
use symcone::moves::{verify_with_model, EXTRAPOLATED};
use symcone::planner::{plan, witness_square, PlanOutcome};
use symcone::rational::int;
use symcone::ClassVector;

#[derive(Default)]
struct Tally {
    certified: usize,
    unsupported: usize,
    inadmissible: usize,
}

fn check(model: &symcone::chambers::CurveModel, target: &ClassVector, what: &str, tally: &mut Tally) {
    match plan(model, target).unwrap() {
        PlanOutcome::Certificate(c) => {
            let r = verify_with_model(&c, model);
            assert!(r.passed, "{what}: {:?}", r.failure);
            assert_eq!(r.final_class.as_ref(), Some(target), "{what}");
            assert!(!c.annotations.iter().any(|a| a == EXTRAPOLATED), "{what}: no D_n shapes in KK");
            tally.certified += 1;
        }
        PlanOutcome::Unsupported {
            witness, witness_labels, ..
        } => {
            if let Some(w) = witness {
                let idx: Vec<usize> = witness_labels.iter().map(|l| model.curve_index(l).unwrap()).collect();
                assert!(!witness_square(model, &idx, &w).unwrap().is_negative(), "{what}");
            }
            tally.unsupported += 1;
        }
    }
}

fn run_sets(sets: &[Vec<usize>]) -> Tally {
    let model = build_kk_model(true).unwrap();
    let alpha = kk_interior_class(&model).unwrap();
    let mut tally = Tally::default();
    for set in sets {
        let names: Vec<&str> = set.iter().map(|&i| model.curves()[i].label.as_str()).collect();
        let Ok(g) = ChamberDescriptor::new(&model, set) else {
            tally.inadmissible += 1;
            continue;
        };
        let corner = corner_point(&model, &alpha, &g).unwrap();
        check(&model, &corner, &format!("corner {names:?}"), &mut tally);
        let chamber = chamber_point(&model, &corner, &g, &int(1)).unwrap();
        check(&model, &chamber.class, &format!("chamber {names:?}"), &mut tally);
    }
    tally
}

#[test]
fn every_plan_for_small_vanishing_sets_verifies() {
    let mut sets = Vec::new();
    for i in 0..21 {
        for j in i + 1..21 {
            sets.push(vec![i, j]);
        }
    }
    let t = run_sets(&sets);
    assert_eq!(t.inadmissible, 0);
    assert!(t.certified > 0);
    println!("certified {}, unsupported {}", t.certified, t.unsupported);
}

#[test]
fn every_plan_for_random_larger_sets_verifies() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut sets = Vec::new();
    while sets.len() < 100 {
        let size = rng.gen_range(3..=5);
        let mut set: Vec<usize> = (0..21).collect();
        for i in (1..21).rev() {
            set.swap(i, rng.gen_range(0..=i));
        }
        set.truncate(size);
        set.sort();
        sets.push(set);
    }
    let t = run_sets(&sets);
    println!(
        "certified {}, unsupported {}, inadmissible {}",
        t.certified, t.unsupported, t.inadmissible
    );
    assert!(t.certified > 0);
}
