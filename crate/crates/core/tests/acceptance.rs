//! Acceptance suite: every claim the library is built around, checked
//! exactly. Each test prints one PASS line; run with
//! `cargo test -p zprcodes --test acceptance -- --nocapture` to see them.

use std::time::Instant;
use zprcodes::block::{
    code_parameters, p_standard_form, r_optimal_parameters, standard_form, ParameterSet,
};
use zprcodes::conv::{bound_dcj_params, decompose, l_value, ConvCode, ConvError};
use zprcodes::lift::{construct_mdp, SearchStrategy};
use zprcodes::pbasis::{
    exhaustive_span_membership, expand_generator_sequence, is_p_generator_sequence,
    p_combination, p_span_membership, PCombination,
};
use zprcodes::poly::{sliding_matrix, PolyMatrix, PolyVec, ScalarMatrix};
use zprcodes::ring::RingParams;

struct XorShift(u64);

impl XorShift {
    fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }
}

fn z4() -> RingParams {
    RingParams::new(2, 2).unwrap()
}

/// Deterministic corpus of random delay-free codes over Z_4 and Z_9 with
/// n <= 3 and encoder degree <= 2, built by expanding random free rows.
fn delay_free_corpus(total: usize) -> Vec<ConvCode> {
    let mut rng = XorShift(0xacce_97ed_5eedu64);
    let mut corpus = Vec::with_capacity(total);
    let rings = [(2u64, 2u32), (3, 2)];
    let mut ring_idx = 0usize;
    while corpus.len() < total {
        let (p, r) = rings[ring_idx % rings.len()];
        ring_idx += 1;
        let ring = RingParams::new(p, r).unwrap();
        let n = 2 + (rng.next() % 2) as usize;
        let ktilde = if p == 2 { 1 + (rng.next() % 2) as usize } else { 1 };
        if ktilde >= n {
            continue;
        }
        let entries: Vec<Vec<Vec<u64>>> = (0..ktilde)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        (0..=(rng.next() % 3) as usize)
                            .map(|_| rng.next() % ring.modulus())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let g = match PolyMatrix::from_entries(ring, &entries) {
            Ok(g) => g,
            Err(_) => continue,
        };
        let Ok(code) = ConvCode::new(expand_generator_sequence(&g)) else {
            continue;
        };
        if !code.is_delay_free() {
            continue;
        }
        corpus.push(code);
    }
    corpus
}

#[test]
fn mdp_lift_reproduction_2_2_2_over_z25() {
    let start = Instant::now();
    let built = construct_mdp(2, 2, 2, 5, 2, &SearchStrategy::Exhaustive, 1 << 24)
        .expect("construction succeeds");
    assert_eq!(built.l_ring, 2, "L = 2");
    assert_eq!(built.profile.values(), vec![2, 3, 4], "column distances 2, 3, 4");
    let (n, ceil_k_r) = (2u64, 2u64.div_ceil(2));
    for entry in built.profile.entries() {
        let expected = (n - ceil_k_r) * (entry.j as u64 + 1) + 1;
        assert_eq!(entry.value, expected, "d^c_j = (n - ceil(k/r))(j+1) + 1");
        assert!(entry.search_size <= 5u128.pow(6), "search stays within 5^6 inputs");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "construction took {elapsed:?}");
    println!(
        "PASS: MDP lift (2,2,2) over Z_25 certifies d^c = (2,3,4) = B(j), L = 2, in {elapsed:?}"
    );
}

#[test]
fn bound_sweep_l_agreement() {
    let start = Instant::now();
    let mut checked = 0u64;
    for n in 1..=8u64 {
        for k in 1..=8u64 {
            for r in 1..=4u32 {
                if k.div_ceil(r as u64) >= n {
                    continue;
                }
                for delta in 0..=12u64 {
                    // l_value cross-checks floor(X) against the direct
                    // maximization internally and errors on any mismatch
                    match l_value(n, k, r, delta) {
                        Ok(_) => checked += 1,
                        Err(e) => panic!("L disagreement at ({n},{k},{r},{delta}): {e}"),
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(checked > 2000, "sweep covered {checked} tuples");
    assert!(elapsed.as_secs_f64() < 1.0, "sweep took {elapsed:?}");
    println!("PASS: floor(X) = max{{j : B(j) <= SB}} over {checked} tuples in {elapsed:?}");
}

#[test]
fn column_distance_bound_suite() {
    let corpus = delay_free_corpus(500);
    let mut checks = 0u64;
    for code in &corpus {
        let params = code.parameters().expect("delay-free corpus");
        for j in 0..=2u64 {
            let d = code
                .column_distance(j as usize, 1 << 24)
                .expect("search within budget")
                .value;
            let bound = bound_dcj_params(code.n() as u64, &params, j).unwrap();
            assert!(
                d <= bound,
                "d^c_{j} = {d} exceeds (j+1)(n - sum k_i) + 1 = {bound}"
            );
            checks += 1;
        }
    }
    println!("PASS: {checks} certified column distances respect the parameter bound (500 codes)");
}

#[test]
fn sliding_matrix_rows_generator_sequence_suite() {
    let corpus = delay_free_corpus(500);
    let mut checks = 0u64;
    for code in &corpus {
        for j in 0..=3usize {
            let s = sliding_matrix(code.encoder(), j);
            assert!(
                is_p_generator_sequence(&s.matrix().to_poly_matrix()),
                "sliding rows fail at j = {j}"
            );
            checks += 1;
        }
    }
    println!("PASS: {checks} truncated sliding matrices have p-generator-sequence rows (500 codes)");
}

#[test]
fn p_standard_form_golden_and_row_count() {
    // golden case over Z_4
    let s = standard_form(
        &ScalarMatrix::new(z4(), 2, vec![vec![1, 1], vec![0, 2]]).unwrap(),
    );
    assert_eq!(s.matrix().rows(), &[vec![1, 1], vec![0, 2]]);
    let g = p_standard_form(&s);
    assert_eq!(g.rows(), &[vec![1, 1], vec![2, 0], vec![0, 2]]);

    // row count k = sum k_i (r - i) across 200 random standard forms
    let mut rng = XorShift(0x00de_fec7_ed01u64);
    let mut done = 0usize;
    while done < 200 {
        let (p, r) = match rng.next() % 4 {
            0 => (2u64, 2u32),
            1 => (2, 3),
            2 => (2, 4),
            _ => (3, 2),
        };
        let ring = RingParams::new(p, r).unwrap();
        let n = 1 + (rng.next() % 6) as usize;
        let k = 1 + (rng.next() as usize % n);
        let rows: Vec<Vec<u64>> = (0..k)
            .map(|_| (0..n).map(|_| rng.next() % ring.modulus()).collect())
            .collect();
        let s = standard_form(&ScalarMatrix::new(ring, n, rows).unwrap());
        if s.matrix().k() == 0 {
            continue;
        }
        let g = p_standard_form(&s);
        assert_eq!(g.k() as u64, s.params().p_dimension(), "k = sum k_i (r - i)");
        done += 1;
    }
    println!("PASS: Z_4 golden p-standard form and the row-count formula on 200 random forms");
}

#[test]
fn r_optimal_parameters_match_exhaustive_enumeration() {
    // all representations sum (r - i) k_i = k by direct recursion
    fn enumerate(k: u64, r: u32) -> Vec<ParameterSet> {
        fn rec(counts: &mut Vec<u64>, value: u64, remaining: u64, out: &mut Vec<Vec<u64>>) {
            if value == 0 {
                if remaining == 0 {
                    out.push(counts.clone());
                }
                return;
            }
            for c in 0..=(remaining / value) {
                counts.push(c);
                rec(counts, value - 1, remaining - c * value, out);
                counts.pop();
            }
        }
        let mut raw = Vec::new();
        rec(&mut Vec::new(), r as u64, k, &mut raw);
        let best = raw.iter().map(|c| c.iter().sum::<u64>()).min().unwrap();
        let mut sets: Vec<ParameterSet> = raw
            .into_iter()
            .filter(|c| c.iter().sum::<u64>() == best)
            .map(ParameterSet::new)
            .collect();
        sets.sort();
        sets
    }

    for r in 1..=8u32 {
        for k in 0..=60u64 {
            let fast = r_optimal_parameters(k, r);
            for set in &fast {
                assert_eq!(set.total(), k.div_ceil(r as u64), "sum k_i = ceil(k/r)");
                assert_eq!(set.p_dimension(), k, "sum (r-i) k_i = k");
            }
            if k > 0 {
                assert_eq!(fast, enumerate(k, r), "all optima at k={k}, r={r}");
            }
        }
    }
    let six = r_optimal_parameters(25, 6);
    let tuples: Vec<&[u64]> = six.iter().map(|s| s.counts()).collect();
    assert!(tuples.contains(&&[4, 0, 0, 0, 0, 1][..]));
    assert!(tuples.contains(&&[0, 5, 0, 0, 0, 0][..]));
    println!("PASS: r-optimal parameter sets equal exhaustive enumeration for k <= 60, r <= 8");
}

#[test]
fn z4_example_encoder_fidelity() {
    let ring = z4();
    let encoder = PolyMatrix::from_entries(ring, &[
        vec![vec![1, 1], vec![1, 3]],
        vec![vec![2], vec![2]],
    ])
    .unwrap();
    let code = ConvCode::new(encoder.clone()).expect("valid p-basis");
    assert!(code.is_delay_free(), "delay-free");
    let member = PolyVec::constant(ring, &[2, 2]);
    let witness = p_span_membership(&member, &encoder)
        .expect("rows form a p-generator sequence")
        .expect("(2,2) is in the image");
    assert_eq!(p_combination(&witness, &encoder).unwrap(), member);
    println!("PASS: the Z_4 encoder [[1+D,1+3D],[2,2]] is a delay-free p-basis containing (2,2)");
}

#[test]
fn membership_oracle_equivalence() {
    let mut rng = XorShift(0x0acc_02ac1eu64);
    let rings = [(2u64, 2u32), (3, 2), (2, 3)];
    let mut done = 0usize;
    let mut disagreements = 0usize;
    while done < 1000 {
        let (p, r) = rings[done % rings.len()];
        let ring = RingParams::new(p, r).unwrap();
        let n = 1 + (rng.next() % 3) as usize;
        let entries: Vec<Vec<Vec<u64>>> = vec![(0..n)
            .map(|_| vec![rng.next() % ring.modulus(), rng.next() % ring.modulus()])
            .collect()];
        let g = match PolyMatrix::from_entries(ring, &entries) {
            Ok(g) => g,
            Err(_) => continue,
        };
        let rows = expand_generator_sequence(&g);
        if !is_p_generator_sequence(&rows) {
            continue;
        }
        let target = if rng.next() % 2 == 0 {
            let coeffs: Vec<Vec<u64>> = (0..rows.k())
                .map(|_| vec![rng.next() % p, rng.next() % p])
                .collect();
            let c = PCombination::new(ring, coeffs).unwrap();
            p_combination(&c, &rows).unwrap()
        } else {
            PolyVec::new(ring, n, vec![
                (0..n).map(|_| rng.next() % ring.modulus()).collect(),
                (0..n).map(|_| rng.next() % ring.modulus()).collect(),
            ])
            .unwrap()
        };
        let fast = p_span_membership(&target, &rows).unwrap();
        match fast {
            Some(c) => {
                // the witness must reproduce the target, and the oracle must
                // find some combination within the witness degree
                assert_eq!(p_combination(&c, &rows).unwrap(), target);
                let witness_deg =
                    c.coeffs().iter().map(|poly| poly.len()).max().unwrap_or(1).max(2);
                let slow = exhaustive_span_membership(&target, &rows, witness_deg - 1, 1 << 26)
                    .unwrap();
                if slow.is_none() {
                    disagreements += 1;
                }
            }
            None => {
                let slow = exhaustive_span_membership(&target, &rows, 2, 1 << 26).unwrap();
                if slow.is_some() {
                    disagreements += 1;
                }
            }
        }
        done += 1;
    }
    assert_eq!(disagreements, 0, "layered and exhaustive membership disagree");
    println!("PASS: layered membership agrees with the exhaustive oracle on 1000 instances");
}

#[test]
fn decomposition_recovers_layered_generators() {
    let mut rng = XorShift(0xdec0_0051u64);
    let mut done = 0usize;
    while done < 100 {
        let (p, r) = match rng.next() % 3 {
            0 => (2u64, 2u32),
            1 => (3, 2),
            _ => (2, 3),
        };
        let ring = RingParams::new(p, r).unwrap();
        let n = 2 + (rng.next() % 2) as usize;
        // random layer row counts with sum <= n, at least one row
        let mut counts = vec![0usize; r as usize];
        let mut left = n;
        for c in counts.iter_mut() {
            if left == 0 {
                break;
            }
            *c = (rng.next() as usize) % (left + 1);
            left -= *c;
        }
        if counts.iter().sum::<usize>() == 0 {
            counts[0] = 1;
        }
        let mut raw_rows = Vec::new();
        let mut input_rows = Vec::new();
        for (i, &c) in counts.iter().enumerate() {
            for _ in 0..c {
                let entries: Vec<Vec<u64>> = (0..=(rng.next() % 2) as usize)
                    .map(|_| (0..n).map(|_| rng.next() % ring.modulus()).collect())
                    .collect();
                let row = PolyVec::new(ring, n, entries).unwrap();
                input_rows.push(row.scale(ring.p_pow(i as u32)));
                raw_rows.push(row);
            }
        }
        let input = PolyMatrix::new(ring, n, input_rows.clone()).unwrap();
        // independent full-rank certificate for the unscaled stack: over
        // Z_p the p-dimension of a row module is its rank
        let stack = PolyMatrix::new(ring, n, raw_rows).unwrap();
        let rank = zprcodes::pbasis::p_dimension(&stack.project_mod_p());
        if rank != input_rows.len() {
            continue; // redraw: the stack is genuinely rank-deficient mod p
        }
        let layers = decompose(&input).expect("full-rank stacks must decompose");
        // rebuild p^i G_i and compare spans through digit membership
        let mut rebuilt_rows = Vec::new();
        for (i, layer) in layers.iter().enumerate() {
            for row in layer.rows() {
                rebuilt_rows.push(row.scale(ring.p_pow(i as u32)));
            }
        }
        let rebuilt = PolyMatrix::new(ring, n, rebuilt_rows).unwrap();
        let a = expand_generator_sequence(&input);
        let b = expand_generator_sequence(&rebuilt);
        for row in a.rows() {
            assert!(
                p_span_membership(row, &b).unwrap().is_some(),
                "input row escapes the rebuilt span"
            );
        }
        for row in b.rows() {
            assert!(
                p_span_membership(row, &a).unwrap().is_some(),
                "rebuilt row escapes the input span"
            );
        }
        done += 1;
    }
    // the known degenerate case raises the dedicated error
    let g = PolyMatrix::from_entries(z4(), &[
        vec![vec![1, 1], vec![1, 3]],
        vec![vec![2], vec![2]],
    ])
    .unwrap();
    assert!(matches!(decompose(&g), Err(ConvError::DegenerateDecomposition(_))));
    println!("PASS: decomposition re-spans 100 random layered inputs; degenerate case detected");
}

#[test]
fn all_checks_are_exact() {
    // every assertion in this suite is an exact equality or an exact
    // inequality between integers; nothing is compared within a tolerance.
    // Re-derive the headline construction through two independent routes.
    let built = construct_mdp(2, 2, 2, 5, 2, &SearchStrategy::Exhaustive, 1 << 24).unwrap();
    for entry in built.profile.entries() {
        let j = entry.j as u64;
        // route 1: the certified exhaustive search
        let route1 = entry.value;
        // route 2: the closed-form bound value
        let route2 = (2 - 2u64.div_ceil(2)) * (j + 1) + 1;
        assert_eq!(route1, route2);
    }
    // block-code side: parameters of G(0) match the lift shape exactly
    let params = built.code.parameters().unwrap();
    assert_eq!(params, code_parameters(&built.code.encoder().at_zero()));
    println!("PASS: every criterion is an exact integer check; no tolerances exist in the suite");
}
