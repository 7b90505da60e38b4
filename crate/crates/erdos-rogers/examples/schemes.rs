//! Colour schemes and their exact value calculus: the distinguished
//! extremal schemes, per-node local values, cores, canonical labelling,
//! and exhaustive enumeration of isomorphism classes.
//!
//! Run with `cargo run --example schemes`.

use erdos_rogers::exponents::{classify_pair, exponents};
use erdos_rogers::ratio::format_ratio;
use erdos_rogers::schemes::{
    blockwise_value, canonical_scheme, core, count_exponents, enumerate_schemes, local_value,
    overlapping_blocks_scheme, scheme_value, single_block_scheme, Scheme,
};

fn main() {
    let pair = classify_pair(3, 5).unwrap();
    let e = exponents(pair);

    // A scheme on t nodes covers every pair exactly once with blocks of
    // size 2..=s. Three isomorphism classes exist at (3, 5).
    let all_pairs = Scheme::new(
        5,
        3,
        (0..5)
            .flat_map(|v| (0..v).map(move |u| vec![u, v]))
            .collect(),
    )
    .unwrap();
    let q1 = single_block_scheme(pair);
    let q2 = overlapping_blocks_scheme(pair);

    println!("scheme values at (s, t) = (3, 5):");
    for (name, q) in [
        ("all-pairs", &all_pairs),
        ("single-block", &q1),
        ("overlapping", &q2),
    ] {
        let v = scheme_value(q, &e).unwrap();
        let (total, per_edge) = count_exponents(q, &e).unwrap();
        println!(
            "  {name:<13} b = {:2}, l = {:2}, v(Q) = {:<6} expected count ~ n^({}), per edge n^({})",
            q.b(),
            q.l(),
            format_ratio(&v),
            format_ratio(&total),
            format_ratio(&per_edge),
        );
        // The blockwise formula computes the same value along a different
        // route; the two agree exactly on every scheme.
        assert_eq!(v, blockwise_value(q, &e).unwrap());
    }

    // Local values split v(Q) + (delta + 2 alpha) across the nodes.
    println!("\nlocal values of the overlapping-blocks scheme:");
    let mut locsum = erdos_rogers::ratio::int(0);
    for node in 0..5 {
        let lv = local_value(&q2, node, &e).unwrap();
        println!("  node {node}: v(P) = {}", format_ratio(&lv));
        locsum += lv;
    }
    let expected = scheme_value(&q2, &e).unwrap()
        + e.delta().clone()
        + erdos_rogers::ratio::int(2) * e.alpha();
    assert_eq!(locsum, expected);
    println!(
        "  sum = v(Q) + delta + 2 alpha = {}",
        format_ratio(&expected)
    );

    // The core is the induced subconfiguration of minimal value; it is the
    // structure the final deletion pass targets.
    let c = core(&q2, &e).unwrap();
    println!(
        "\ncore of the overlapping-blocks scheme: nodes {:?}, value {}",
        c.node_subset,
        format_ratio(&c.value)
    );

    // Canonical labelling is invariant under node relabelling: permuting
    // the nodes of a scheme never changes its canonical form.
    let relabelled = Scheme::new(
        5,
        3,
        vec![
            vec![4, 2, 0],
            vec![0, 1, 3],
            vec![4, 1],
            vec![4, 3],
            vec![2, 1],
            vec![2, 3],
        ],
    )
    .unwrap();
    assert_eq!(canonical_scheme(&relabelled), canonical_scheme(&q2));
    println!("\na relabelled copy canonicalizes to the same representative:");
    println!("  {:?}", canonical_scheme(&q2).blocks());

    // Exhaustive enumeration by isomorphism class, ordered by number of
    // large blocks and then canonical code.
    println!("\nisomorphism class counts:");
    for (s, t) in [(3u32, 5u32), (4, 6), (4, 7), (5, 8), (6, 9)] {
        let classes = enumerate_schemes(s, t).unwrap();
        println!("  (s={s}, t={t}): {} classes", classes.len());
    }
}
