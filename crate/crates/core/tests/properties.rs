//! Property tests for the structural invariants that hold on every input.

use proptest::prelude::*;

use cutstream::dist::{read_stream, stream_string, EdgeStream, StreamOrder};
use cutstream::graph::{
    beta_distance, classify_components, cut_value, is_bipartite, max_cut_exact, read_edge_list,
    edge_list_string, BitVector, Bipartition, MultiGraph,
};
use cutstream::Label;

fn arb_graph() -> impl Strategy<Value = MultiGraph> {
    (2usize..10).prop_flat_map(|n| {
        proptest::collection::vec((0..n as u32, 0..n as u32, 1u32..4), 0..14).prop_map(
            move |triples| {
                let mut g = MultiGraph::new(n);
                for (u, v, c) in triples {
                    if u != v {
                        g.add_edge_with_multiplicity(u, v, c).unwrap();
                    }
                }
                g
            },
        )
    })
}

proptest! {
    #[test]
    fn cut_value_equals_weight_of_incidence_image(g in arb_graph(), mask: u64) {
        let bits = BitVector::from_mask(g.n(), mask & ((1 << g.n()) - 1));
        let cut = cut_value(&g, &Bipartition::from_bits(bits.clone())).unwrap();
        let image = g.incidence().apply(&bits).unwrap();
        prop_assert_eq!(cut, image.weight() as u64);
    }

    #[test]
    fn beta_distance_stays_below_half(g in arb_graph()) {
        prop_assume!(g.m() > 0);
        let beta = beta_distance(&g).unwrap();
        prop_assert!(beta <= num_rational::Ratio::new(1, 2));
    }

    #[test]
    fn component_census_totals_match(g in arb_graph()) {
        prop_assert_eq!(classify_components(&g).total(), g.component_count());
    }

    #[test]
    fn max_cut_is_m_exactly_on_bipartite_graphs(g in arb_graph()) {
        prop_assume!(g.m() > 0);
        let (opt, witness) = max_cut_exact(&g).unwrap();
        prop_assert_eq!(opt == g.m(), is_bipartite(&g).is_some());
        prop_assert_eq!(cut_value(&g, &witness).unwrap(), opt);
        prop_assert!(opt >= g.m().div_ceil(2));
    }

    #[test]
    fn transpose_images_have_even_weight(g in arb_graph(), mask: u64) {
        let m = g.incidence();
        let s = BitVector::from_fn(m.r(), |e| (mask >> (e % 64)) & 1 == 1);
        let image = m.apply_transpose(&s).unwrap();
        prop_assert_eq!(image.weight() % 2, 0);
    }

    #[test]
    fn edge_list_text_round_trips(g in arb_graph()) {
        let text = edge_list_string(&g);
        let back = read_edge_list(text.as_bytes()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn stream_text_round_trips(
        n in 2usize..30,
        seed: u64,
        yes in any::<bool>(),
        order in 0u8..3,
        raw in proptest::collection::vec((0u32..30, 0u32..30), 0..20),
    ) {
        let edges: Vec<(u32, u32)> = raw
            .into_iter()
            .filter(|&(u, v)| u != v && (u as usize) < n && (v as usize) < n)
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        let stream = EdgeStream {
            n,
            order: match order {
                0 => StreamOrder::Canonical,
                1 => StreamOrder::Uniform,
                _ => StreamOrder::Iid,
            },
            label: if yes { Label::Yes } else { Label::No },
            source_seed: seed,
            edges,
        };
        let back = read_stream(stream_string(&stream).as_bytes()).unwrap();
        prop_assert_eq!(back, stream);
    }
}
