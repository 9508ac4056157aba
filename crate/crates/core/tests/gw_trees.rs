use frogmodel::gw::{
    classify_types, erase_bushes, label_stretches, truncate_stretches, write_edge_list, Label, OffspringDistribution,
    RootedTree, VertexId, ROOT,
};
use frogmodel::sim::FrogInit;
use frogmodel::stats::{chi_square_p_value, chi_square_two_sample_p_value, MeanEstimate};
use frogmodel::Error;
use proptest::prelude::*;

fn dist(p: &[f64]) -> OffspringDistribution {
    OffspringDistribution::new(p.to_vec()).unwrap()
}

fn edge_list(t: &RootedTree, depth: u32) -> String {
    let mut out = Vec::new();
    write_edge_list(t, depth, None, &|_| 0, &mut out).unwrap();
    String::from_utf8(out).unwrap()
}

/// Lengths of complete stretches, sorted.
fn stretch_lengths(t: &RootedTree, horizon: u32) -> Vec<u32> {
    let mut v: Vec<u32> = label_stretches(t, horizon).stretches.iter().map(|s| s.len).collect();
    v.sort_unstable();
    v
}

#[test]
fn pgf_values() {
    assert_eq!(dist(&[0.0, 0.0, 1.0]).pgf(0.5).unwrap(), 0.25);
    let d = dist(&[0.1, 0.2, 0.3, 0.4]);
    assert!((d.pgf(1.0).unwrap() - 1.0).abs() < 1e-15);
    let d = dist(&[0.25, 0.0, 0.75]);
    assert!((d.pgf(1.0 / 3.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert!(matches!(d.pgf(1.5), Err(Error::Domain(_))));
    assert!(d.pgf(-0.1).is_err());
}

#[test]
fn extinction_examples() {
    assert_eq!(dist(&[0.0, 0.3, 0.7]).extinction_prob(), 0.0);
    assert_eq!(dist(&[0.5, 0.2, 0.3]).extinction_prob(), 1.0);
    assert!((dist(&[0.25, 0.0, 0.75]).extinction_prob() - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn backbone_and_bush_of_the_quadratic_law() {
    let d = dist(&[0.25, 0.0, 0.75]);
    // f*(s) = ((1/4) + (3/4)(1/3 + 2s/3)^2 - 1/3) / (2/3) = (s + s^2) / 2
    for i in 0..=20 {
        let s = i as f64 / 20.0;
        let expanded = (s + s * s) / 2.0;
        assert!((d.backbone_pgf(s).unwrap() - expanded).abs() < 1e-13);
        assert!((d.bush_pgf(s).unwrap() - (0.75 + s * s / 4.0)).abs() < 1e-13);
    }
    assert!(d.backbone_pgf(0.0).unwrap().abs() < 1e-15);
    let b = d.backbone().unwrap();
    assert_eq!(b.probs().len(), 3);
    assert!(b.p(0).abs() < 1e-15 && (b.p(1) - 0.5).abs() < 1e-13 && (b.p(2) - 0.5).abs() < 1e-13);
    let bush = d.bush().unwrap();
    assert!((bush.mean() - 0.5).abs() < 1e-13);
    assert!((bush.pgf(0.0).unwrap() - 0.75).abs() < 1e-13);
    assert!((d.expected_bush_size().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn transforms_at_the_extreme_extinction_probabilities() {
    let no_leaves = dist(&[0.0, 0.4, 0.6]);
    assert_eq!(no_leaves.backbone().unwrap(), no_leaves);
    assert!(matches!(no_leaves.bush(), Err(Error::NoBushes)));
    assert!(no_leaves.expected_bush_size().is_err());
    let sub = dist(&[0.6, 0.2, 0.2]);
    assert!(matches!(sub.backbone(), Err(Error::NoBackbone)));
    assert_eq!(sub.bush().unwrap(), sub);
}

#[test]
fn bush_sizes_match_total_progeny_mean() {
    let d = dist(&[0.2, 0.1, 0.3, 0.4]);
    let bush = d.bush().unwrap();
    let sizes: Vec<f64> = (0..20_000u64)
        .map(|s| RootedTree::galton_watson(&bush, s, 0).explore(u32::MAX).len() as f64)
        .collect();
    let est = MeanEstimate::from_samples(&sizes);
    let exact = d.expected_bush_size().unwrap();
    assert!(est.covers(exact, 3.0), "{est:?} vs {exact}");
}

#[test]
fn parsing_forms() {
    let a = OffspringDistribution::parse(r#"{"probs":[0.25,0,0.75]}"#).unwrap();
    let b = OffspringDistribution::parse("p0=0.25, p2=0.75").unwrap();
    let c = OffspringDistribution::parse("probs=0.25,0,0.75").unwrap();
    assert_eq!(a, b);
    assert_eq!(b, c);
    assert!(matches!(OffspringDistribution::parse("p0=0.5,p1=0.6"), Err(Error::InvalidDistribution(_))));
    assert!(OffspringDistribution::parse("p1=-0.1,p2=1.1").is_err());
    assert_eq!("p3=1".parse::<OffspringDistribution>().unwrap().d_min(), Some(3));
}

#[test]
fn degenerate_laws_give_rays_and_regular_trees() {
    let ray = RootedTree::galton_watson(&dist(&[0.0, 1.0]), 5, 10);
    assert!(ray.explore(10).iter().all(|&v| ray.child_count(v) == 1));
    assert_eq!(ray.explore(10).len(), 11);
    let t = RootedTree::galton_watson(&dist(&[0.0, 0.0, 0.0, 1.0]), 5, 4);
    assert!(t.explore(3).iter().all(|&v| t.child_count(v) == 3));
}

#[test]
fn root_degree_frequencies() {
    let d = dist(&[0.1, 0.3, 0.4, 0.2]);
    let mut counts = [0u64; 4];
    for s in 0..100_000u64 {
        counts[RootedTree::galton_watson(&d, s, 1).child_count(ROOT) as usize] += 1;
    }
    let p = chi_square_p_value(&counts, d.probs());
    assert!(p > 0.01, "p = {p}, counts {counts:?}");
}

#[test]
fn samplers_agree_on_the_first_two_generations() {
    let d = dist(&[0.0, 0.3, 0.5, 0.2]);
    let cell = |t: &RootedTree| -> usize {
        let z1 = t.child_count(ROOT) as usize;
        let z2: usize = t.children(ROOT).map(|c| t.child_count(c) as usize).sum();
        z1 * 10 + z2
    };
    let mut a = vec![0u64; 40];
    let mut b = vec![0u64; 40];
    for s in 0..20_000u64 {
        a[cell(&RootedTree::galton_watson(&d, s, 2))] += 1;
        b[cell(&RootedTree::decomposed(&d, s, 2).unwrap())] += 1;
    }
    let p = chi_square_two_sample_p_value(&a, &b);
    assert!(p > 0.01, "p = {p}");
}

#[test]
fn decomposed_marks_and_run_lengths() {
    let d = dist(&[0.0, 0.5, 0.5]);
    let mut marked = 0u64;
    let mut lengths = vec![0u64; 12];
    let n = 50_000u64;
    for s in 0..n {
        let t = RootedTree::decomposed(&d, s, 4).unwrap();
        if let Some(len) = t.run_mark(ROOT) {
            marked += 1;
            lengths[(len as usize).min(11)] += 1;
            // The run really has `len` one-child vertices.
            let mut v = ROOT;
            for _ in 0..len {
                assert_eq!(t.child_count(v), 1);
                v = t.children(v).start;
            }
            assert_eq!(t.child_count(v), 2);
        } else {
            assert_eq!(t.child_count(ROOT), 2);
        }
    }
    let se = (0.25 / n as f64).sqrt();
    assert!((marked as f64 / n as f64 - 0.5).abs() < 3.0 * se);
    let mut probs: Vec<f64> = (0..12).map(|m| if m == 0 { 0.0 } else { 0.5f64.powi(m) }).collect();
    probs[11] = 0.5f64.powi(10);
    assert!(chi_square_p_value(&lengths, &probs) > 0.01);
    assert!(RootedTree::decomposed(&dist(&[0.0, 1.0]), 1, 3).is_err());
}

#[test]
fn ray_labels() {
    let ray = RootedTree::galton_watson(&dist(&[0.0, 1.0]), 1, 20);
    let map = label_stretches(&ray, 20);
    let order = ray.explore(20);
    assert_eq!(map.labels.get(ROOT), Label::N);
    for &v in &order {
        let depth = ray.depth(v);
        if (2..19).contains(&depth) {
            assert_eq!(map.labels.get(v), Label::S, "depth {depth}");
        }
    }
    assert_eq!(map.labels.count(Label::Es), 0);
    assert!(map.stretches.is_empty());
}

#[test]
fn no_one_child_vertices_means_no_stretches() {
    let t = RootedTree::galton_watson(&dist(&[0.0, 0.0, 0.6, 0.4]), 9, 5);
    let map = label_stretches(&t, 5);
    for v in t.explore(4) {
        assert_eq!(map.labels.get(v), Label::N);
    }
}

#[test]
fn hand_built_stretch() {
    // Binary root; one branch is a run of three one-child vertices ending
    // in a binary vertex.
    let children = vec![vec![1, 2], vec![3], vec![], vec![4], vec![5], vec![6, 7], vec![], vec![]];
    let (t, id) = RootedTree::from_children(&children).unwrap();
    let map = label_stretches(&t, 10);
    let expect = [Label::N, Label::Bs, Label::N, Label::S, Label::Es, Label::N, Label::N, Label::N];
    for (v, want) in expect.iter().enumerate() {
        assert_eq!(map.labels.get(id[v]), *want, "vertex {v}");
    }
    assert_eq!(map.stretches.len(), 1);
    let s = map.stretches[0];
    assert_eq!((s.start, s.end, s.len), (id[1], id[4], 3));
}

#[test]
fn labels_past_the_horizon_are_not_guessed() {
    let t = RootedTree::galton_watson(&dist(&[0.0, 0.5, 0.5]), 3, 6);
    let map = label_stretches(&t, 6);
    for v in t.explore(6) {
        if t.depth(v) == 6 {
            assert_eq!(map.labels.get(v), Label::Unlabeled);
        }
    }
}

fn long_stretch_tree(len: usize) -> RootedTree {
    // root -> {a, leaf}; a starts a run of `len` one-child vertices ending
    // in a vertex with two leaves.
    let mut children = vec![vec![1, 2], vec![], vec![]];
    children[0] = vec![1, 2];
    let mut prev = 1;
    for _ in 1..len {
        children.push(vec![]);
        let next = children.len() - 1;
        children[prev] = vec![next];
        prev = next;
    }
    let end = children.len();
    children.push(vec![end + 1, end + 2]);
    children.push(vec![]);
    children.push(vec![]);
    children[prev] = vec![end];
    RootedTree::from_children(&children).unwrap().0
}

#[test]
fn truncation_shortens_long_stretches_only() {
    let t = long_stretch_tree(7);
    assert_eq!(stretch_lengths(&t, 20), vec![7]);
    let map = label_stretches(&t, 20);
    let short = truncate_stretches(&t, &map, 3).unwrap();
    assert_eq!(stretch_lengths(&short, 20), vec![3]);
    assert_eq!(short.explore(20).len(), t.explore(20).len() - 4);
    let same = truncate_stretches(&t, &map, 7).unwrap();
    assert_eq!(edge_list(&same, 20), edge_list(&t, 20));
    assert!(truncate_stretches(&t, &map, 0).is_err());
}

#[test]
fn truncation_histogram_and_idempotence() {
    let d = dist(&[0.0, 0.6, 0.3, 0.1]);
    for seed in 0..20 {
        let h = 14;
        let t = RootedTree::galton_watson(&d, seed, h);
        let map = label_stretches(&t, h);
        let once = truncate_stretches(&t, &map, 2).unwrap();
        let mut expected: Vec<u32> = map.stretches.iter().map(|s| s.len.min(2)).collect();
        expected.sort_unstable();
        // Shortened stretches pull deeper vertices inside the horizon, so
        // compare only stretches that existed before.
        let after = stretch_lengths(&once, h);
        assert!(after.iter().all(|&l| l <= 2));
        assert!(after.len() >= expected.len());
        let twice = truncate_stretches(&once, &label_stretches(&once, h), 2).unwrap();
        assert_eq!(edge_list(&once, h), edge_list(&twice, h), "seed {seed}");
    }
}

#[test]
fn bushes_without_leaves_change_nothing() {
    let d = dist(&[0.0, 0.2, 0.5, 0.3]);
    let t = RootedTree::galton_watson(&d, 4, 5);
    let init = FrogInit::new(vec![0.3, 0.4, 0.3]).unwrap();
    let erased = erase_bushes(&t, 5, &init, 11, 1000).unwrap();
    assert_eq!(edge_list(&erased.tree, 5), edge_list(&t, 5));
    let order = t.explore(5);
    let own: Vec<u32> = order
        .iter()
        .map(|&v| frogmodel::sim::frog_count(&t, &init, 11, v))
        .collect();
    let new_order = erased.tree.explore(5);
    let masses: Vec<u32> = new_order.iter().map(|&v| erased.mass[v as usize]).collect();
    assert_eq!(own, masses);
}

#[test]
fn two_leaf_bushes_add_their_frogs() {
    // root -> a; a -> {leaf, leaf, b}; b -> c at the horizon.
    let (t, id) = RootedTree::from_children(&[vec![1], vec![2, 3, 4], vec![], vec![], vec![5], vec![]]).unwrap();
    let types = classify_types(&t, 3);
    assert_eq!(types.get(id[2]), Label::Br);
    assert_eq!(types.get(id[4]), Label::G);
    let erased = erase_bushes(&t, 3, &FrogInit::constant(1), 0, 10).unwrap();
    assert_eq!(erased.tree.explore(3).len(), 4);
    let a = erased.tree.children(ROOT).start;
    assert_eq!(erased.mass[a as usize], 3);
    assert_eq!(erased.mass[ROOT as usize], 0);
}

#[test]
fn erasing_conserves_frog_mass() {
    let d = dist(&[0.3, 0.2, 0.3, 0.2]);
    let init = FrogInit::new(vec![0.2, 0.5, 0.3]).unwrap();
    let mut checked = 0;
    for seed in 0..40 {
        let h = 7;
        let t = RootedTree::galton_watson(&d, seed, h);
        let erased = erase_bushes(&t, h, &init, seed, 100_000).unwrap();
        let types = classify_types(&t, h);
        if types.get(ROOT) != Label::G {
            continue;
        }
        checked += 1;
        let total: u64 = t
            .explore(h)
            .iter()
            .map(|&v| frogmodel::sim::frog_count(&t, &init, seed, v) as u64)
            .sum();
        let mass: u64 = erased.mass.iter().map(|&m| m as u64).sum();
        assert_eq!(total, mass, "seed {seed}");
        let g_count = t.explore(h).iter().filter(|&&v| types.get(v) == Label::G).count();
        assert_eq!(erased.tree.explore(h).len(), g_count);
    }
    assert!(checked > 10);
}

#[test]
fn bush_cap_is_enforced() {
    let (t, _) = RootedTree::from_children(&[vec![1], vec![2, 3], vec![4], vec![5], vec![], vec![6], vec![]]).unwrap();
    // Vertex 2 heads a bush of two vertices; vertex 3 reaches depth 4.
    let r = erase_bushes(&t, 4, &FrogInit::constant(1), 0, 1);
    assert!(matches!(r, Err(Error::BushCapExceeded { cap: 1 })));
    assert!(erase_bushes(&t, 4, &FrogInit::constant(1), 0, 2).is_ok());
}

#[test]
fn edge_list_is_deterministic_and_well_formed() {
    let d = dist(&[0.1, 0.3, 0.4, 0.2]);
    let a = RootedTree::galton_watson(&d, 77, 6);
    let b = RootedTree::galton_watson(&d, 77, 6);
    // Touch b in a different order first.
    for v in b.explore(3).into_iter().rev() {
        b.children(v);
    }
    assert_eq!(edge_list(&a, 6), edge_list(&b, 6));
    let text = edge_list(&a, 6);
    for (i, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split(' ').collect();
        assert_eq!(fields.len(), 4);
        assert_eq!(fields[1], i.to_string());
        if i == 0 {
            assert_eq!(fields[0], "-");
        } else {
            assert!(fields[0].parse::<usize>().unwrap() < i);
        }
    }
}

#[test]
fn subtrees_are_independent_of_siblings() {
    // The subtree under a vertex depends only on its path key.
    let d = dist(&[0.1, 0.3, 0.4, 0.2]);
    let t = RootedTree::galton_watson(&d, 3, 8);
    let shape = |t: &RootedTree, v: VertexId| -> Vec<u32> {
        let mut out = vec![];
        let mut queue = vec![v];
        while let Some(u) = queue.pop() {
            out.push(t.child_count(u));
            if t.depth(u) < 4 {
                queue.extend(t.children(u));
            }
        }
        out
    };
    let u = RootedTree::galton_watson(&d, 3, 8);
    u.explore(4);
    for c in t.children(ROOT) {
        assert_eq!(shape(&t, c), shape(&u, c));
    }
}

fn law_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, 2..7).prop_filter_map("positive mass", |w| {
        let s: f64 = w.iter().sum();
        (s > 1e-3).then(|| w.iter().map(|x| x / s).collect())
    })
}

proptest! {
    #[test]
    fn extinction_is_the_smallest_fixpoint(p in law_strategy()) {
        let d = OffspringDistribution::new(p).unwrap();
        let q = d.extinction_prob();
        prop_assert!((d.pgf(q).unwrap() - q).abs() <= 1e-10);
        let mut r = 0.0;
        while r < q - 1e-4 {
            prop_assert!(d.pgf(r).unwrap() > r);
            r += 1e-4;
        }
    }

    #[test]
    fn backbone_and_bush_are_laws(p in law_strategy()) {
        let d = OffspringDistribution::new(p).unwrap();
        let q = d.extinction_prob();
        if q < 1.0 {
            let b = d.backbone().unwrap();
            prop_assert!(b.p(0).abs() < 1e-12);
            for i in 0..=10 {
                let s = i as f64 / 10.0;
                prop_assert!((b.pgf(s).unwrap() - d.backbone_pgf(s).unwrap()).abs() < 1e-9);
            }
        }
        if q > 0.0 && q < 1.0 {
            let bush = d.bush().unwrap();
            prop_assert!((bush.mean() - d.pgf_derivative(q).unwrap()).abs() < 1e-9);
            prop_assert!(bush.mean() < 1.0);
            for i in 0..=10 {
                let s = i as f64 / 10.0;
                prop_assert!((bush.pgf(s).unwrap() - d.bush_pgf(s).unwrap()).abs() < 1e-9);
            }
        }
    }
}
