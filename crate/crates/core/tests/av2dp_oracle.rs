use kpeaked::av2dp::{solve_av2, DEFAULT_MAX_R};
use kpeaked::control::{brute_av, verify_av, AvInstance, Witness};
use kpeaked::election::{Election, Vote};
use kpeaked::gen::{random_av, ElectionShape};
use kpeaked::peaked::Axis;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn check(inst: &AvInstance) -> bool {
    let fast = solve_av2(inst, DEFAULT_MAX_R).unwrap();
    let slow = brute_av(inst).unwrap();
    assert_eq!(fast.answer, slow.answer, "instance {inst:?}");
    if let Some(Witness::Votes(w)) = &fast.witness {
        assert!(verify_av(inst, w), "bad witness {w:?} for {inst:?}");
    }
    fast.answer
}

#[test]
fn random_two_peaked_instances_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut yes = 0;
    let total = 600;
    for _ in 0..total {
        let r = rng.gen_range(3..=5);
        let m = rng.gen_range(r + 2..=10);
        let shape = ElectionShape {
            m,
            r,
            k: Some(2),
            registered: rng.gen_range(0..=6),
            unregistered: rng.gen_range(1..=8),
            budget: rng.gen_range(0..=4),
        };
        let inst = random_av(&shape, &mut rng).unwrap();
        if check(&inst) {
            yes += 1;
        }
    }
    assert!(yes > total / 10 && yes < total * 9 / 10, "yes count {yes}");
}

fn v(order: &[usize]) -> Vote {
    Vote::new(order.to_vec(), order.len()).unwrap()
}

fn instance(p: usize, r: usize, reg: &[&[usize]], unreg: &[&[usize]], budget: usize) -> AvInstance {
    let m = reg.iter().chain(unreg).next().unwrap().len();
    AvInstance {
        election: Election::with_default_names(m, p, r, reg.iter().map(|o| v(o)).collect()).unwrap(),
        unregistered: unreg.iter().map(|o| v(o)).collect(),
        budget,
        axis: Axis::identity(m),
        k: 2,
    }
}

#[test]
fn p_at_axis_ends() {
    let a = instance(
        0,
        3,
        &[&[3, 4, 5, 2, 1, 0], &[4, 5, 3, 2, 1, 0]],
        &[&[0, 1, 2, 3, 4, 5], &[0, 1, 5, 4, 3, 2], &[1, 0, 2, 3, 4, 5]],
        3,
    );
    check(&a);
    let b = instance(
        5,
        3,
        &[&[0, 1, 2, 3, 4, 5], &[1, 2, 0, 3, 4, 5]],
        &[&[5, 4, 3, 2, 1, 0], &[5, 0, 1, 4, 3, 2], &[4, 5, 3, 2, 1, 0]],
        3,
    );
    check(&b);
}

#[test]
fn all_one_block_all_two_block_and_duplicates() {
    let one = instance(
        3,
        3,
        &[&[0, 1, 2, 3, 4, 5, 6], &[6, 5, 4, 3, 2, 1, 0]],
        &[&[3, 2, 4, 1, 5, 0, 6], &[3, 4, 5, 2, 6, 1, 0], &[2, 1, 3, 0, 4, 5, 6]],
        2,
    );
    check(&one);
    let two = instance(
        3,
        3,
        &[&[0, 1, 2, 3, 4, 5, 6], &[5, 6, 4, 3, 2, 1, 0]],
        &[&[3, 0, 4, 1, 2, 5, 6], &[3, 2, 6, 1, 0, 5, 4], &[3, 0, 1, 4, 2, 5, 6]],
        3,
    );
    check(&two);
    let dup_vote = [3, 2, 6, 1, 0, 5, 4];
    let dups = instance(
        3,
        3,
        &[&[0, 1, 2, 4, 5, 3, 6], &[0, 1, 2, 4, 5, 3, 6]],
        &[&dup_vote, &dup_vote, &dup_vote, &dup_vote],
        4,
    );
    check(&dups);
}

#[test]
fn nothing_approves_p() {
    let inst = instance(0, 2, &[&[1, 2, 3, 0]], &[&[2, 3, 1, 0], &[3, 2, 1, 0]], 2);
    let d = solve_av2(&inst, DEFAULT_MAX_R).unwrap();
    assert!(!d.answer);
}

#[test]
fn three_peaks_rejected() {
    let mut inst = instance(0, 2, &[&[1, 2, 3, 0, 4, 5]], &[], 0);
    inst.k = 3;
    assert!(solve_av2(&inst, DEFAULT_MAX_R).is_err());
}
