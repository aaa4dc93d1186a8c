use causal_lens::causal::check_interaction_without_disturbance;
use causal_lens::oracle::{conjugation_identity_holds, Intervention, InterventionKind};
use causal_lens::{
    embed, find_witness, has_causal_influence, hierarchy_report, neighbourhood, t_process,
    CausalModel, ClassicalChannel, CompositeSystem, ReversibleChannel, UnitaryChannel, WireSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NAMES: [&str; 4] = ["A", "B", "C", "D"];

fn systems(dims: &[usize]) -> (CompositeSystem, CompositeSystem) {
    let ins: Vec<(String, usize)> = dims
        .iter()
        .enumerate()
        .map(|(k, &d)| (NAMES[k].to_string(), d))
        .collect();
    let outs: Vec<(String, usize)> = ins.iter().map(|(n, d)| (format!("{n}'"), *d)).collect();
    (
        CompositeSystem::from_pairs(&ins).unwrap(),
        CompositeSystem::from_pairs(&outs).unwrap(),
    )
}

fn random_classical(rng: &mut ChaCha8Rng, wires: usize, max_dim: usize) -> ClassicalChannel {
    let dims: Vec<usize> = (0..wires).map(|_| rng.random_range(2..=max_dim)).collect();
    let (i, o) = systems(&dims);
    ClassicalChannel::random(i, o, rng).unwrap()
}

fn random_unitary(rng: &mut ChaCha8Rng, qubits: usize) -> UnitaryChannel {
    let (i, o) = systems(&vec![2; qubits]);
    UnitaryChannel::random(i, o, rng).unwrap()
}

fn one(n: &str) -> WireSet {
    WireSet::single(n)
}

/// Every (single input, single output) pair.
fn pairs<C: ReversibleChannel>(u: &C) -> Vec<(WireSet, WireSet)> {
    let mut out = Vec::new();
    for a in u.input().names() {
        for b in u.output().names() {
            out.push((one(a), one(b)));
        }
    }
    out
}

fn union_law<C: ReversibleChannel>(u: &C) {
    let names = u.input().names();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            let joint = neighbourhood(u, &one(names[i]).union(&one(names[j]))).unwrap();
            let split = neighbourhood(u, &one(names[i]))
                .unwrap()
                .union(&neighbourhood(u, &one(names[j])).unwrap());
            assert_eq!(joint, split, "union law for {} {}", names[i], names[j]);
        }
    }
}

fn commutation<C: ReversibleChannel>(u: &C) -> bool {
    let names = u.input().names();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            let ti = t_process(u, &one(names[i])).unwrap();
            let tj = t_process(u, &one(names[j])).unwrap();
            let copy_i = ti.channel.input().select(&[0]);
            let copy_j = tj.channel.input().select(&[0]);
            let common = copy_i.concat(&copy_j).unwrap().concat(u.output()).unwrap();
            let a = embed(&ti.channel, &common).unwrap();
            let b = embed(&tj.channel, &common).unwrap();
            if !a.compose(&b).unwrap().approx_eq(&b.compose(&a).unwrap()) {
                return false;
            }
        }
    }
    true
}

#[test]
fn neighbourhood_union_and_commutation_classical() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let wires = rng.random_range(3..=4);
        let u = random_classical(&mut rng, wires, if wires == 4 { 2 } else { 3 });
        union_law(&u);
        assert!(commutation(&u));
    }
}

#[test]
fn neighbourhood_union_and_commutation_quantum() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for q in [2, 3, 3, 3] {
        let u = random_unitary(&mut rng, q);
        union_law(&u);
        assert!(commutation(&u));
    }
    // A structured case where the neighbourhoods are not everything.
    let (i, o) = systems(&[2, 2, 2]);
    let k = ClassicalChannel::controlled_not(i.select(&[0, 1]), o.select(&[0, 1])).unwrap();
    let u = UnitaryChannel::from_classical(
        &k.tensor(
            &ClassicalChannel::identity(&i.select(&[2]))
                .relabel(i.select(&[2]), o.select(&[2]))
                .unwrap(),
        )
        .unwrap(),
    );
    union_law(&u);
    assert!(commutation(&u));
}

fn chain<C: CausalModel>(u: &C) {
    for (a, b) in pairs(u) {
        let r = hierarchy_report(u, &a, &b).unwrap();
        assert!(r.consistent, "{r:?}");
        if let Some(w) = &r.witness {
            assert!(u.replay_witness(&a, &b, w).unwrap());
        }
    }
}

#[test]
fn hierarchy_classical_collapse() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let wires = rng.random_range(2..=3);
        let u = random_classical(&mut rng, wires, 3);
        chain(&u);
        for (a, b) in pairs(&u) {
            let memory = u.memory_decomposition(&a, &b).unwrap().is_some();
            assert_eq!(memory, !u.signals(&a, &b).unwrap());
        }
    }
}

#[test]
fn quantum_signalling_equals_influence() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let u = random_unitary(&mut rng, 2);
        chain(&u);
        for (a, b) in pairs(&u) {
            assert_eq!(
                u.signals(&a, &b).unwrap(),
                has_causal_influence(&u, &a, &b).unwrap()
            );
        }
    }
    let (i, o) = systems(&[2, 2]);
    let k = UnitaryChannel::controlled_not(i, o).unwrap();
    assert!(k.signals(&one("B"), &one("A'")).unwrap());
    chain(&k);
}

#[test]
fn conjugation_identity_random_instruments() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..30 {
        let wires = rng.random_range(2..=3);
        let u = random_classical(&mut rng, wires, 2);
        let probed = one(NAMES[rng.random_range(0..wires)]);
        let env_dim = rng.random_range(1..=3);
        let n = env_dim * u.input().dim_of(probed.names().next().unwrap()).unwrap();
        let table = (0..n)
            .map(|_| {
                if rng.random_bool(0.2) {
                    None
                } else {
                    Some(rng.random_range(0..n))
                }
            })
            .collect();
        let a = Intervention {
            kind: InterventionKind::Table,
            env_dim,
            table,
        };
        assert!(conjugation_identity_holds(&u, &probed, &a).unwrap());
    }
}

#[test]
fn undisturbed_interaction_forces_influence() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut witnesses = 0;
    for _ in 0..300 {
        let (i, _) = systems(&[2, 2]);
        let u = ClassicalChannel::random(i.clone(), i, &mut rng).unwrap();
        let c = check_interaction_without_disturbance(&u, &one("A")).unwrap();
        assert!(c.consistent());
        if c.forced_influence.is_some() {
            witnesses += 1;
        }
    }
    assert!(witnesses > 0);
}

#[test]
fn inverse_nosignalling_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut checked = 0;
    for _ in 0..100 {
        let (i, o) = systems(&[3, 3]);
        let u = ClassicalChannel::random(i, o, &mut rng).unwrap();
        for (a, b) in pairs(&u) {
            if !u.signals(&a, &b).unwrap() {
                assert!(u.inverse_nosignalling_check(&a, &b).unwrap());
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let (i, o) = systems(&[2, 2]);
    let local = UnitaryChannel::random(i.select(&[0]), o.select(&[0]), &mut rng).unwrap();
    let other = UnitaryChannel::random(i.select(&[1]), o.select(&[1]), &mut rng).unwrap();
    let u = local.tensor(&other).unwrap();
    assert!(u.inverse_nosignalling_check(&one("A"), &one("B'")).unwrap());
}

#[test]
fn witnesses_exist_for_every_influence() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..30 {
        let u = random_classical(&mut rng, 3, 2);
        for (a, b) in pairs(&u) {
            let influence = has_causal_influence(&u, &a, &b).unwrap();
            match find_witness(&u, &a, &b) {
                Ok(w) => {
                    assert!(influence);
                    assert!(u.replay_witness(&a, &b, &w).unwrap());
                }
                Err(_) => assert!(!influence),
            }
        }
    }
}
