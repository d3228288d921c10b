use chordcolor::diagram::{adjacency_from_diagram, conflict_graph_from_book, LevelRule};
use chordcolor::solvers::coloring::brute_force_3color;
use chordcolor::{ChordDiagram, CircleGraph, SpineInstance};
use proptest::prelude::*;

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("c{i}")).collect()
}

/// Random rolled-out diagram on `n` chords.
fn arb_diagram(max_n: usize) -> impl Strategy<Value = ChordDiagram> {
    (1..=max_n).prop_flat_map(|n| {
        let ends: Vec<usize> = (0..n).flat_map(|v| [v, v]).collect();
        Just(ends)
            .prop_shuffle()
            .prop_map(move |e| ChordDiagram::from_endpoints(labels(n), e).unwrap())
    })
}

fn interleave(d: &ChordDiagram, u: usize, v: usize) -> bool {
    let pos = |x: usize| -> Vec<usize> {
        d.endpoints()
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == x)
            .map(|(i, _)| i)
            .collect()
    };
    let (pu, pv) = (pos(u), pos(v));
    pv.iter().filter(|&&p| pu[0] < p && p < pu[1]).count() == 1
}

fn bipartite(g: &CircleGraph) -> bool {
    let n = g.vertex_count();
    let mut side = vec![None; n];
    for s in 0..n {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(false);
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for w in g.neighbors(u) {
                match side[w] {
                    None => {
                        side[w] = Some(!side[u].unwrap());
                        stack.push(w);
                    }
                    Some(x) if x == side[u].unwrap() => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

proptest! {
    #[test]
    fn adjacency_is_alternation(d in arb_diagram(12)) {
        let g = adjacency_from_diagram(&d);
        for u in 0..d.chord_count() {
            prop_assert!(!g.adjacent(u, u));
            for v in 0..d.chord_count() {
                if u != v {
                    prop_assert_eq!(g.adjacent(u, v), interleave(&d, u, v));
                    prop_assert_eq!(g.adjacent(u, v), g.adjacent(v, u));
                }
            }
        }
    }

    #[test]
    fn levels_are_nesting_depth(d in arb_diagram(12)) {
        let lv = d.levels();
        for v in 0..d.chord_count() {
            let encasers: Vec<usize> = (0..d.chord_count()).filter(|&u| d.encases(u, v)).collect();
            if encasers.is_empty() {
                prop_assert_eq!(lv.get(v), 1);
            } else {
                let parents = d.direct_encasers(v);
                prop_assert!(parents.iter().any(|&p| lv.get(p) + 1 == lv.get(v)));
                // longest chain of encasers ending at v
                let deepest = encasers.iter().map(|&u| lv.get(u)).max().unwrap();
                prop_assert_eq!(lv.get(v), deepest + 1);
            }
        }
        let shallow = d.levels_with(LevelRule::ShallowestEncaser);
        for v in 0..d.chord_count() {
            prop_assert!(shallow.get(v) <= lv.get(v));
        }
    }

    #[test]
    fn display_parse_round_trip(d in arb_diagram(10)) {
        let back = ChordDiagram::parse_with_labels(d.labels(), &d.to_string()).unwrap();
        prop_assert_eq!(back, d);
    }

    #[test]
    fn book_conflicts_are_alternating_arcs(
        n in 2usize..9,
        raw in prop::collection::vec((0usize..9, 0usize..9), 0..20),
        seed in any::<u64>(),
    ) {
        let edges: Vec<(usize, usize)> = raw
            .into_iter()
            .map(|(a, b)| (a % n, b % n))
            .filter(|(a, b)| a != b)
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        // deterministic shuffle from the seed
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let inst = SpineInstance::new(labels(n), order.clone(), edges).unwrap();
        let g = conflict_graph_from_book(&inst);
        prop_assert_eq!(g.vertex_count(), inst.edges().len());
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut arcs: Vec<(usize, usize)> = inst
            .edges()
            .iter()
            .map(|&(u, v)| (pos[u].min(pos[v]), pos[u].max(pos[v])))
            .collect();
        arcs.sort();
        for i in 0..arcs.len() {
            for j in 0..arcs.len() {
                if i == j {
                    continue;
                }
                let (a, b) = arcs[i];
                let (c, d) = arcs[j];
                let cross = (a < c && c < b && b < d) || (c < a && a < d && d < b);
                prop_assert_eq!(g.adjacent(i, j), cross);
            }
        }
        let d = g.diagram().unwrap();
        prop_assert_eq!(&d.to_graph(), &g);
    }
}

#[test]
fn k5_on_a_spine_needs_three_pages() {
    let mut text = String::from("1 2 3 4 5\n");
    for a in 1..=5 {
        for b in a + 1..=5 {
            text.push_str(&format!("{a} {b}\n"));
        }
    }
    let inst = SpineInstance::parse(&text).unwrap();
    let g = conflict_graph_from_book(&inst);
    assert_eq!(g.vertex_count(), 10);
    assert!(!bipartite(&g));
    assert!(brute_force_3color(&g).unwrap().is_some());
}

#[test]
fn malformed_diagram_names_label() {
    match ChordDiagram::parse("a b a") {
        Err(chordcolor::Error::MalformedDiagram { label, count }) => {
            assert_eq!(label, "b");
            assert_eq!(count, 1);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn spine_rejects_non_permutation() {
    assert!(SpineInstance::new(labels(3), vec![0, 0, 1], vec![]).is_err());
    assert!(SpineInstance::new(labels(3), vec![0, 1], vec![]).is_err());
}
