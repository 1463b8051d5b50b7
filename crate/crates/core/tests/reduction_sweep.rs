use kpeaked::control::{brute_av, brute_dc, brute_dv};
use kpeaked::graph::{random_graph, unlabeled_graphs, Graph};
use kpeaked::reductions::{
    brute_is, brute_vc, brute_vis, reduce_is3_to_av3, reduce_is_to_dc3, reduce_is_to_dc3_literal,
    reduce_vc3_to_dv2, reduce_vis_to_av2, VisInstance,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn corpus(max_degree: usize) -> Vec<Graph> {
    (1..=6).flat_map(|n| unlabeled_graphs(n, max_degree, true)).collect()
}

fn check_vc3(g: &Graph) {
    for k in 0..=g.n() {
        let want = brute_vc(g, k).unwrap().is_some();
        for r in [3, 4] {
            let out = reduce_vc3_to_dv2(g, k, r).unwrap();
            let got = brute_dv(&out.instance).unwrap().answer;
            assert_eq!(got, want, "{g:?} k={k} r={r}");
        }
    }
}

fn check_is3(g: &Graph) {
    for k in 2..=g.n() {
        let want = brute_is(g, k).unwrap().is_some();
        for r in [4, 5] {
            let out = reduce_is3_to_av3(g, k, r).unwrap();
            let got = brute_av(&out.instance).unwrap().answer;
            assert_eq!(got, want, "{g:?} k={k} r={r}");
        }
    }
}

#[test]
fn vc3_matches_vertex_cover() {
    for g in corpus(3) {
        check_vc3(&g);
    }
}

#[test]
fn is3_matches_independent_set() {
    for g in corpus(3) {
        check_is3(&g);
    }
}

#[test]
fn dc3_matches_independent_set() {
    let mut literal_misses = Vec::new();
    for g in corpus(6).into_iter().filter(|g| g.num_edges() > 0) {
        for k in 1..=g.n() {
            let want = brute_is(&g, k).unwrap().is_some();
            let out = reduce_is_to_dc3(&g, k).unwrap();
            assert_eq!(brute_dc(&out.instance, 32).unwrap().answer, want, "{g:?} k={k}");
            let lit = reduce_is_to_dc3_literal(&g, k).unwrap();
            if brute_dc(&lit.instance, 32).unwrap().answer != want {
                literal_misses.push((g.num_edges(), k));
            }
        }
    }
    // the literal weights only fail on the single edge with k = 1
    assert_eq!(literal_misses, vec![(1, 1)]);
}

#[test]
fn random_graphs_up_to_ten() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..100 {
        let n = 2 + i % 9;
        let g = random_graph(n, 3, 0.3, true, &mut rng);
        check_vc3(&g);
        check_is3(&g);
    }
}

fn all_groups(lefts: &[u64]) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = lefts.iter().map(|&l| vec![l]).collect();
    for (i, &a) in lefts.iter().enumerate() {
        for &b in &lefts[i + 1..] {
            out.push(vec![a, b]);
        }
    }
    out
}

#[test]
fn vis_matches_interval_selection() {
    let groups = all_groups(&[1, 2, 4, 5, 7]);
    let mut yes = 0;
    let mut total = 0;
    for a in &groups {
        for b in &groups {
            let mut cases = vec![vec![a.clone(), b.clone()]];
            for c in groups.iter().step_by(3) {
                cases.push(vec![a.clone(), b.clone(), c.clone()]);
            }
            for case in cases {
                let vis = VisInstance::new(case).unwrap();
                let want = brute_vis(&vis).unwrap().is_some();
                let out = reduce_vis_to_av2(&vis).unwrap();
                assert_eq!(brute_av(&out.instance).unwrap().answer, want, "{vis:?}");
                yes += want as usize;
                total += 1;
            }
        }
    }
    assert!(yes > 0 && yes < total);
}
