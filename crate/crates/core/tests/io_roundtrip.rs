use kpeaked::control::{ControlInstance, Problem};
use kpeaked::gen::{random_ac, random_av, random_dc, random_dv, random_mrsp, random_vis, ElectionShape};
use kpeaked::graph::random_graph;
use kpeaked::io::{parse_graph, parse_mrsp, parse_vis, write_graph, write_mrsp, write_vis, ElectionFile};
use kpeaked::reductions::reduce_is3_to_av3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn random_elections_are_fixpoints() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for i in 0..1000 {
        let m = rng.gen_range(3..10);
        let shape = ElectionShape {
            m,
            r: rng.gen_range(1..m),
            k: if i % 3 == 0 { None } else { Some(rng.gen_range(1..=m.div_ceil(2))) },
            registered: rng.gen_range(0..8),
            unregistered: rng.gen_range(0..8),
            budget: rng.gen_range(0..4),
        };
        let inst = match i % 4 {
            0 => ControlInstance::Av(random_av(&shape, &mut rng).unwrap()),
            1 => ControlInstance::Dv(random_dv(&shape, &mut rng).unwrap()),
            2 => ControlInstance::Ac(random_ac(&shape, &mut rng).unwrap()),
            _ => ControlInstance::Dc(random_dc(&shape, &mut rng).unwrap()),
        };
        let text = ElectionFile::from_instance(&inst).write();
        let parsed = ElectionFile::parse(&text).unwrap();
        assert_eq!(parsed.write(), text);
        let back = parsed.instance(inst.problem(), None).unwrap();
        assert_eq!(back.election(), inst.election());
        assert_eq!(back.axis(), inst.axis());
        assert_eq!(back.budget(), inst.budget());
    }
}

#[test]
fn reduction_output_round_trips() {
    let g = kpeaked::graph::Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
    let out = reduce_is3_to_av3(&g, 2, 5).unwrap();
    let inst = ControlInstance::Av(out.instance);
    let text = ElectionFile::from_instance(&inst).write();
    let back = ElectionFile::parse(&text).unwrap().instance(Problem::Av, None).unwrap();
    assert!(back.validate().is_empty());
    assert_eq!(ElectionFile::from_instance(&back).write(), text);
}

#[test]
fn other_formats_are_fixpoints() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let g = random_graph(rng.gen_range(0..12), 3, 0.4, false, &mut rng);
        let t = write_graph(&g);
        assert_eq!(parse_graph(&t).unwrap(), g);
        let m = random_mrsp(9, 3, 6, 2, 2, &mut rng).unwrap();
        let t = write_mrsp(&m);
        assert_eq!(write_mrsp(&parse_mrsp(&t).unwrap()), t);
        let v = random_vis(rng.gen_range(1..5), 12, &mut rng).unwrap();
        let t = write_vis(&v);
        assert_eq!(parse_vis(&t).unwrap(), v);
    }
}
