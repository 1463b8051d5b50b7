use kpeaked::control::{brute_av, brute_dv, verify_av, verify_dv, Witness};
use kpeaked::fpt::{dv_type_space, preprocess_av, solve_av_fpt, solve_dv_fpt, AvPreprocess};
use kpeaked::gen::{random_av, random_dv, ElectionShape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn shape(rng: &mut ChaCha8Rng) -> ElectionShape {
    ElectionShape {
        m: rng.gen_range(4..=10),
        r: 3,
        k: None,
        registered: rng.gen_range(0..=12),
        unregistered: rng.gen_range(1..=12),
        budget: rng.gen_range(0..=4),
    }
}

#[test]
fn dv_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut yes = 0;
    for _ in 0..600 {
        let inst = random_dv(&shape(&mut rng), &mut rng).unwrap();
        let fast = solve_dv_fpt(&inst).unwrap();
        let slow = brute_dv(&inst).unwrap();
        assert_eq!(fast.answer, slow.answer, "{inst:?}");
        if let Some(Witness::Votes(w)) = &fast.witness {
            assert!(verify_dv(&inst, w));
            // no deleted vote approves p
            assert!(w.iter().all(|v| !v.approves(inst.election.distinguished(), 3)));
            yes += 1;
        }
        let space = dv_type_space(&inst);
        assert!(space.types.keys().all(|k| !k.is_empty() && k.len() <= 3));
    }
    assert!(yes > 60 && yes < 540, "{yes}");
}

#[test]
fn av_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let mut yes = 0;
    for _ in 0..600 {
        let inst = random_av(&shape(&mut rng), &mut rng).unwrap();
        let fast = solve_av_fpt(&inst).unwrap();
        let slow = brute_av(&inst).unwrap();
        assert_eq!(fast.answer, slow.answer, "{inst:?}");
        if let Some(Witness::Votes(w)) = &fast.witness {
            assert!(verify_av(&inst, w));
            yes += 1;
        }
        if let AvPreprocess::Residual(res) = preprocess_av(&inst).unwrap() {
            let p = inst.election.distinguished();
            assert!(res
                .pool
                .iter()
                .all(|v| v.approves(p, 3) && v.order()[..3].iter().all(|c| !res.saturated.contains(c))));
        }
    }
    assert!(yes > 60 && yes < 540, "{yes}");
}
