use morphmap::interp::{EmbeddingVector, InterpKind};
use morphmap::metric::FrsQuantifier;
use morphmap::score_model::SubjectRole;
use morphmap::simulator::{
    evaluate, frs_score, gen_identities, gen_probes, make_morph, pair_score, run_ablation,
    run_simulation, select_pairs, InterpSpace, MorphSource, SimConfig, Simulation, SurrogateKind,
    World,
};
use morphmap::Embedding;

fn mid() -> SimConfig {
    SimConfig {
        dim: 128,
        n_identities: 30,
        probes_per_identity: 6,
        frs_proj_dim: 64,
        n_pairs: 20,
        target_far: 0.01,
        ..SimConfig::reference()
    }
}

fn success_rate(sim: &Simulation, role: SubjectRole, target_far: f64) -> f64 {
    let (cal, _) = evaluate(sim, target_far, FrsQuantifier::Joint).unwrap();
    let recs: Vec<_> = sim
        .dataset
        .records()
        .iter()
        .filter(|r| r.role == role)
        .collect();
    let hits = recs
        .iter()
        .filter(|r| r.score >= cal.table.get(&r.frs_id).unwrap())
        .count();
    hits as f64 / recs.len() as f64
}

#[test]
fn identities_concentrate_in_high_dimension() {
    let c = SimConfig {
        n_identities: 254,
        ..SimConfig::reference()
    };
    let ids = gen_identities(&c);
    assert_eq!(ids.len(), 254);
    let mut worst: f64 = 0.0;
    for i in 0..ids.len() {
        for j in i + 1..ids.len() {
            worst = worst.max(ids[i].dot(&ids[j]).abs());
        }
    }
    assert!(worst < 0.25, "max |cos| = {worst}");
}

#[test]
fn probe_similarity_falls_with_noise() {
    let mean_cos = |sigma: f64| {
        let c = SimConfig {
            probe_noise_sigma: sigma,
            probes_per_identity: 10,
            n_identities: 10,
            ..SimConfig::reference()
        };
        let ids = gen_identities(&c);
        let cos: Vec<f64> = ids
            .iter()
            .enumerate()
            .flat_map(|(i, e)| gen_probes(e, i, &c).into_iter().map(move |p| p.dot(e)))
            .collect();
        assert_eq!(cos.len(), 100);
        cos.iter().sum::<f64>() / cos.len() as f64
    };
    assert!(mean_cos(0.1) > mean_cos(0.5));
}

#[test]
fn endpoint_morph_scores_like_its_first_subject() {
    for space in InterpSpace::ALL {
        for kind in InterpKind::ALL {
            let c = SimConfig {
                alpha: 0.0,
                interp_kind: kind,
                interp_space: space,
                ..mid()
            };
            let world = World::generate(&c, true).unwrap();
            let enc = world.encoder.as_ref().unwrap();
            let morph =
                make_morph(&world.identities[0], &world.identities[1], &c, Some(enc)).unwrap();
            let own = match space {
                InterpSpace::IdentityLevel => world.identities[0].clone(),
                InterpSpace::LatentLevel => {
                    EmbeddingVector::new(enc.encode(world.identities[0].as_slice())).unwrap()
                }
            };
            assert_eq!(morph, own, "{space} {kind}");
        }
    }
}

#[test]
fn slerp_midpoint_is_equiangular_and_closer_than_the_pair() {
    let c = SimConfig {
        n_identities: 200,
        dim: 16,
        ..SimConfig::reference()
    };
    let ids = gen_identities(&c);
    let mut checked = 0;
    for w in ids.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let ab = a.dot(b);
        if ab <= 1e-6 {
            continue;
        }
        for kind in InterpKind::ALL {
            let m = make_morph(
                a,
                b,
                &SimConfig {
                    interp_kind: kind,
                    ..c.clone()
                },
                None,
            )
            .unwrap();
            let (ca, cb) = (m.cosine(a).unwrap(), m.cosine(b).unwrap());
            assert!((ca - cb).abs() < 1e-9);
            assert!(ca.min(cb) > ab);
        }
        checked += 1;
    }
    assert!(checked > 50, "only {checked} acute pairs");
}

#[test]
fn chosen_pairs_are_the_top_ranked() {
    let c = mid();
    let world = World::generate(&c, false).unwrap();
    let chosen = select_pairs(&world.identities, &world.frs, c.n_pairs).unwrap();
    let mut all = Vec::new();
    for a in 0..c.n_identities {
        for b in a + 1..c.n_identities {
            let s = pair_score(&world.frs, &world.identities[a], &world.identities[b]).unwrap();
            all.push((s, a, b));
        }
    }
    all.sort_by(|x, y| y.0.total_cmp(&x.0).then((x.1, x.2).cmp(&(y.1, y.2))));
    let want: Vec<(usize, usize)> = all[..c.n_pairs].iter().map(|&(_, a, b)| (a, b)).collect();
    let got: Vec<(usize, usize)> = chosen.iter().map(|p| (p.a, p.b)).collect();
    assert_eq!(got, want);
    for (p, (s, _, _)) in chosen.iter().zip(&all) {
        assert!((p.mean_score - s).abs() < 1e-12);
    }
}

#[test]
fn frs_scores_are_symmetric_and_bounded() {
    let c = mid();
    let world = World::generate(&c, false).unwrap();
    let (a, b): (&Embedding, &Embedding) = (&world.identities[0], &world.probes[3][1]);
    for m in &world.frs {
        let s = frs_score(m, a, b).unwrap();
        assert_eq!(s, frs_score(m, b, a).unwrap());
        assert!((-1.0..=1.0).contains(&s));
        assert!((frs_score(m, a, a).unwrap() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn endpoint_attack_collapses_to_baseline() {
    let base = SimConfig {
        alpha: 0.0,
        probe_noise_sigma: 0.1,
        ..SimConfig::reference()
    };
    let attack = run_simulation(&base).unwrap();
    let baseline = run_simulation(&SimConfig {
        morph_source: MorphSource::UnrelatedIdentity,
        ..base.clone()
    })
    .unwrap();
    let trials = attack
        .dataset
        .records()
        .iter()
        .filter(|r| r.role == SubjectRole::Criminal)
        .count();
    assert!(trials >= 200);
    let a = success_rate(&attack, SubjectRole::Criminal, base.target_far);
    let b = success_rate(&baseline, SubjectRole::Criminal, base.target_far);
    assert!(
        (a - b).abs() <= 0.05,
        "alpha=0 criminal {a} vs unrelated {b}"
    );
    assert!(success_rate(&attack, SubjectRole::Accomplice, base.target_far) > 0.5);
}

#[test]
fn more_noise_never_raises_mean_attack_success() {
    let mean_top = |sigma: f64| {
        let total: f64 = (0..5u64)
            .map(|s| {
                let c = SimConfig {
                    seed: 1000 + s,
                    probe_noise_sigma: sigma,
                    ..mid()
                };
                let sim = run_simulation(&c).unwrap();
                *evaluate(&sim, c.target_far, FrsQuantifier::Joint)
                    .unwrap()
                    .1
                    .get(1, 1)
            })
            .sum();
        total / 5.0
    };
    let (low, high) = (mean_top(0.05), mean_top(0.5));
    assert!(high <= low, "sigma 0.5 gave {high}, sigma 0.05 gave {low}");
}

#[test]
fn interpolated_morphs_beat_unrelated_identities() {
    let c = SimConfig {
        probe_noise_sigma: 0.05,
        ..mid()
    };
    let top = |c: &SimConfig| {
        let sim = run_simulation(c).unwrap();
        *evaluate(&sim, c.target_far, FrsQuantifier::Joint)
            .unwrap()
            .1
            .get(1, 1)
    };
    let attack = top(&c);
    let baseline = top(&SimConfig {
        morph_source: MorphSource::UnrelatedIdentity,
        ..c.clone()
    });
    assert!(attack > baseline, "{attack} vs {baseline}");
}

#[test]
fn degenerate_surrogate_collapses_the_ablation() {
    let c = SimConfig {
        surrogate: SurrogateKind::Identity,
        probe_noise_sigma: 1e-12,
        alpha: 0.5,
        ..mid()
    };
    let rows = run_ablation(&c).unwrap();
    assert_eq!(rows.len(), 4);
    for r in &rows[1..] {
        assert_eq!(r.matrix, rows[0].matrix, "{} {}", r.space, r.kind);
    }
}

#[test]
fn ablation_is_reproducible() {
    let c = mid();
    let a = run_ablation(&c).unwrap();
    let b = run_ablation(&c).unwrap();
    assert_eq!(a, b);
    assert!(a.iter().all(|r| (0.0..=1.0).contains(&r.map_avg)));
}
