//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its elapsed time (visible with `--nocapture`). Every tolerance here is
//! exact: all arithmetic is over GF(p) or exact rationals.

use std::time::Instant;

use num_rational::Rational64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bipath_core::bipath::{
    ArcCode, BipathInterval, BipathModule, BipathPoset, decode_slice_barcode, enumerate_intervals,
    plant_random, slice_restriction_bars, table_slice_interval,
};
use bipath_core::distance::{
    Block, XRat, block_deletion_cost, block_pair_cost, bottleneck_distance, bottleneck_matching,
    eps_interleaved, exhaustive_bottleneck, orbit_blocks,
};
use bipath_core::fibered::{
    build_example_mlambda, example_embedding, example_lines, fibered_arc_code, line_barcode,
};
use bipath_core::field::FieldSpec;
use bipath_core::zigzag::{DecKind, ZzBarcode, ZzInterval};

fn gf(p: u32) -> FieldSpec {
    FieldSpec::new(p).unwrap()
}

fn pass(criterion: usize, name: &str, started: Instant) {
    println!(
        "criterion {criterion} ({name}): PASS in {:.2?}",
        started.elapsed()
    );
}

fn random_arc_code(poset: &BipathPoset, max: usize, rng: &mut impl Rng) -> ArcCode {
    let intervals = enumerate_intervals(poset);
    let mut ac = ArcCode::new();
    for _ in 0..rng.random_range(0..=max) {
        ac.add(intervals[rng.random_range(0..intervals.len())], 1);
    }
    ac
}

#[test]
fn criterion_01_interval_round_trip() {
    let started = Instant::now();
    for n in 2..=5 {
        for m in 1..=4 {
            let poset = BipathPoset::new(n, m).unwrap();
            for field in [gf(2), gf(5)] {
                for iv in enumerate_intervals(&poset) {
                    let module = BipathModule::interval_module(poset, field, &iv).unwrap();
                    let ac = module.arc_code().unwrap();
                    let expected: ArcCode = [(iv, 1)].into_iter().collect();
                    assert_eq!(
                        ac,
                        expected,
                        "interval {iv} on n={n} m={m} p={}",
                        field.modulus()
                    );
                }
            }
        }
    }
    assert!(
        started.elapsed().as_secs() < 30,
        "criterion 1 exceeded 30 s"
    );
    pass(1, "interval round-trip", started);
}

#[test]
fn criterion_02_plant_and_recover() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    for trial in 0..500u64 {
        let sub = rng.next_u64();
        let n = 2 + (sub % 4) as usize; // n in 2..=5
        let m = 1 + ((sub >> 8) % 5) as usize; // m in 1..=5
        let poset = BipathPoset::new(n, m).unwrap();
        let field = gf(if trial % 2 == 0 { 2 } else { 5 });
        // <= 10 summands keeps every pointwise dimension <= 10 <= 12
        let (module, planted) = plant_random(poset, field, 10, sub);
        assert!(module.dims.iter().all(|&d| d <= 12));
        let ac = module.arc_code().unwrap();
        assert_eq!(ac, planted, "trial {trial} (seed {sub}, n={n}, m={m})");
    }
    assert!(
        started.elapsed().as_secs() < 120,
        "criterion 2 exceeded 120 s"
    );
    pass(2, "plant-and-recover, 500 trials", started);
}

#[test]
fn criterion_03_slice_geometry() {
    let started = Instant::now();
    for n in 2..=5 {
        for m in 1..=4 {
            let poset = BipathPoset::new(n, m).unwrap();
            assert_eq!(poset.slice_len(), 2 * n + 4 * m - 3);
            let period = poset.period() as i64;
            let window: Vec<(i64, i64)> = (-2 * period..=2 * period)
                .flat_map(|t| [(t, t), (t + 1, t)])
                .collect();
            for &(a, b) in &window {
                assert_eq!(
                    poset.covering_vertex(a, b).unwrap(),
                    poset.covering_vertex(a + period, b + period).unwrap(),
                    "periodicity at ({a}, {b})"
                );
            }
            for &(a, b) in &window {
                for &(c, d) in &window {
                    if a >= c && b <= d {
                        let u = poset.covering_vertex(a, b).unwrap();
                        let v = poset.covering_vertex(c, d).unwrap();
                        assert!(poset.le(u, v), "order at ({a},{b}) <= ({c},{d})");
                    }
                }
            }
        }
    }
    assert_eq!(BipathPoset::new(4, 4).unwrap().slice_len(), 21);
    pass(3, "slice geometry", started);
}

#[test]
fn criterion_04_restriction_images() {
    let started = Instant::now();
    for n in 2..=5 {
        for m in 1..=4 {
            let poset = BipathPoset::new(n, m).unwrap();
            let field = gf(2);
            for iv in enumerate_intervals(&poset) {
                let module = BipathModule::interval_module(poset, field, &iv).unwrap();
                let got = module.restrict_to_slice().unwrap().barcode();
                let mut expected = ZzBarcode::new();
                for dec in slice_restriction_bars(&poset, &iv) {
                    let range = dec
                        .to_range(poset.slice_offset(), poset.slice_len())
                        .unwrap_or_else(|| panic!("{dec} outside slice for {iv}"));
                    expected.add(range, 1);
                }
                assert_eq!(got, expected, "{iv} on n={n} m={m}");
            }
        }
    }
    pass(4, "single-interval restriction images", started);
}

#[test]
fn criterion_05_conservation() {
    let started = Instant::now();
    // single-interval modules of criterion 1
    for n in 2..=5 {
        for m in 1..=4 {
            let poset = BipathPoset::new(n, m).unwrap();
            for iv in enumerate_intervals(&poset) {
                let module = BipathModule::interval_module(poset, gf(2), &iv).unwrap();
                let slice = module.restrict_to_slice().unwrap();
                let bc = slice.barcode();
                for v in 0..slice.shape.len() {
                    assert_eq!(bc.dim_at(v), slice.dims[v], "zigzag conservation at {v}");
                }
                let ac = module.arc_code().unwrap();
                for v in 0..poset.vertex_count() {
                    assert_eq!(
                        ac.dim_at(&poset, v),
                        module.dims[v],
                        "arc conservation at {v}"
                    );
                }
            }
        }
    }
    // planted modules of criterion 2 (a prefix of the same seed stream)
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    for trial in 0..150u64 {
        let sub = rng.next_u64();
        let n = 2 + (sub % 4) as usize;
        let m = 1 + ((sub >> 8) % 5) as usize;
        let poset = BipathPoset::new(n, m).unwrap();
        let field = gf(if trial % 2 == 0 { 2 } else { 5 });
        let (module, _) = plant_random(poset, field, 10, sub);
        let slice = module.restrict_to_slice().unwrap();
        let bc = slice.barcode();
        for v in 0..slice.shape.len() {
            assert_eq!(bc.dim_at(v), slice.dims[v]);
        }
        let ac = module.arc_code().unwrap();
        for v in 0..poset.vertex_count() {
            assert_eq!(ac.dim_at(&poset, v), module.dims[v]);
        }
    }
    pass(5, "conservation of dimensions", started);
}

#[test]
fn criterion_06_cross_check_integrity() {
    let started = Instant::now();
    // the cross-check runs inside arc_code on every module of criteria 1-2;
    // here, additionally, an injected off-by-one must fail loudly for every
    // family it touches
    let poset = BipathPoset::new(4, 3).unwrap();
    let field = gf(5);
    let (module, _) = plant_random(poset, field, 8, 77);
    let barcode = module.restrict_to_slice().unwrap().barcode();
    assert!(decode_slice_barcode(&poset, &barcode, table_slice_interval).is_ok());

    let mut tested = 0;
    for shift_kind in ["top", "bottom", "right", "left"] {
        // a planted module guaranteed to contain the family being skewed
        let iv = match shift_kind {
            "top" => BipathInterval::Top { i: 1, j: 2 },
            "bottom" => BipathInterval::Bottom { i: 5, j: 6 },
            "right" => BipathInterval::Right { i: 2, j: 4 },
            _ => BipathInterval::Left { i: 1, j: 0 },
        };
        let module = BipathModule::interval_module(poset, field, &iv).unwrap();
        let barcode = module.restrict_to_slice().unwrap().barcode();
        let skewed = move |p: &BipathPoset, candidate: &BipathInterval| {
            let mut dec = table_slice_interval(p, candidate);
            if candidate.kind_label() == shift_kind {
                dec.a -= 1; // off-by-one injection
            }
            dec
        };
        let result = decode_slice_barcode(&poset, &barcode, skewed);
        assert!(result.is_err(), "skewed {shift_kind} table accepted");
        tested += 1;
    }
    assert_eq!(tested, 4);
    pass(6, "cross-check integrity + mutation", started);
}

#[test]
fn criterion_07_distance_axioms() {
    let started = Instant::now();
    let poset = BipathPoset::new(3, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xd157);
    for trial in 0..100 {
        let a = random_arc_code(&poset, 5, &mut rng);
        let b = random_arc_code(&poset, 5, &mut rng);
        let c = random_arc_code(&poset, 5, &mut rng);
        assert_eq!(bottleneck_distance(&a, &a, &poset).unwrap(), XRat::zero());
        let dab = bottleneck_distance(&a, &b, &poset).unwrap();
        let dba = bottleneck_distance(&b, &a, &poset).unwrap();
        assert_eq!(dab, dba, "symmetry, trial {trial}");
        let dbc = bottleneck_distance(&b, &c, &poset).unwrap();
        let dac = bottleneck_distance(&a, &c, &poset).unwrap();
        assert!(
            dac <= XRat::add(&dab, &dbc),
            "triangle, trial {trial}: {dac} > {dab}+{dbc}"
        );
        let (eps, mr) = bottleneck_matching(&a, &b, &poset).unwrap();
        let oa = orbit_blocks(&a, &poset);
        let ob = orbit_blocks(&b, &poset);
        for &(i, j, z) in &mr.pairs {
            assert_eq!(
                oa[i].rep.kind, ob[j].rep.kind,
                "kind preservation, trial {trial}"
            );
            assert!(block_pair_cost(&oa[i].rep, &ob[j].shifted(z)) <= eps);
        }
    }
    pass(7, "distance axioms", started);
}

#[test]
fn criterion_08_distance_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacc3);
    let posets = [
        BipathPoset::new(3, 2).unwrap(),
        BipathPoset::new(2, 3).unwrap(),
    ];
    for trial in 0..50 {
        let poset = posets[trial % posets.len()];
        let a = random_arc_code(&poset, 6, &mut rng);
        let b = random_arc_code(&poset, 6, &mut rng);
        assert!(orbit_blocks(&a, &poset).len() <= 6);
        assert!(orbit_blocks(&b, &poset).len() <= 6);
        let fast = bottleneck_distance(&a, &b, &poset).unwrap();
        let slow = exhaustive_bottleneck(&a, &b, &poset).unwrap();
        assert_eq!(fast, slow, "trial {trial}");
    }
    pass(8, "matcher equals exhaustive minimax", started);
}

#[test]
fn criterion_09_cost_formula_validation() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xb10c);
    let eighth = Rational64::new(1, 8);
    let random_block = |rng: &mut ChaCha8Rng| {
        let kind = match rng.random_range(0..4) {
            0 => DecKind::ClosedClosed,
            1 => DecKind::ClosedOpen,
            2 => DecKind::OpenClosed,
            _ => DecKind::OpenOpen,
        };
        let a = rng.random_range(-8..8);
        let min_w = if kind == DecKind::ClosedClosed { 0 } else { 1 };
        Block::from_ints(kind, a, a + rng.random_range(min_w..10))
    };
    for trial in 0..1000 {
        let x = random_block(&mut rng);
        let y = random_block(&mut rng);
        let claimed = if x.kind == y.kind {
            block_pair_cost(&x, &y)
        } else {
            // cross kinds carry infinite matching cost; the raw predicate
            // flips exactly when both blocks are deletable
            block_deletion_cost(&x).max(block_deletion_cost(&y))
        };
        match claimed {
            XRat::Fin(c) => {
                assert!(
                    eps_interleaved(&x, &y, c + eighth).unwrap(),
                    "trial {trial}: {x} {y}"
                );
                if c > Rational64::from_integer(0) {
                    assert!(
                        !eps_interleaved(&x, &y, c - eighth).unwrap(),
                        "trial {trial}"
                    );
                }
            }
            _ => assert!(!eps_interleaved(&x, &y, Rational64::from_integer(1000)).unwrap()),
        }
        match block_deletion_cost(&x) {
            XRat::Fin(c) => {
                assert!(eps_interleaved(&x, &Block::zero_module(), c + eighth).unwrap());
                if c > Rational64::from_integer(0) {
                    assert!(!eps_interleaved(&x, &Block::zero_module(), c - eighth).unwrap());
                }
            }
            _ => {
                assert!(
                    !eps_interleaved(&x, &Block::zero_module(), Rational64::from_integer(1000))
                        .unwrap()
                );
            }
        }
    }
    // closed-closed and whole-poset blocks report deletion cost infinity
    assert_eq!(block_deletion_cost(&Block::whole()), XRat::PosInf);
    assert_eq!(
        block_deletion_cost(&Block::from_ints(DecKind::ClosedClosed, 1, 4)),
        XRat::PosInf
    );
    pass(9, "cost formulas vs predicate sweeps", started);
}

#[test]
fn criterion_10_example_reproduction() {
    let started = Instant::now();
    let f5 = gf(5);
    let m1 = build_example_mlambda(f5, 1);
    let m_neg1 = build_example_mlambda(f5, 4); // -1 in GF(5)
    let f = example_embedding();

    let ac1 = fibered_arc_code(&m1, std::slice::from_ref(&f))
        .unwrap()
        .remove(0);
    let ac2 = fibered_arc_code(&m_neg1, std::slice::from_ref(&f))
        .unwrap()
        .remove(0);
    let expect1: ArcCode = [
        (BipathInterval::Left { i: 2, j: 4 }, 1), // support {(1,3),(2,3),(2,4),(1,5)}
        (BipathInterval::Left { i: 1, j: 0 }, 1), // support {(1,3),(2,3)}
    ]
    .into_iter()
    .collect();
    let expect2: ArcCode = [
        (BipathInterval::Left { i: 1, j: 4 }, 1), // support {(1,3),(2,3),(1,5)}
        (BipathInterval::Left { i: 2, j: 0 }, 1), // support {(1,3),(2,3),(2,4)}
    ]
    .into_iter()
    .collect();
    assert_eq!(ac1, expect1);
    assert_eq!(ac2, expect2);
    assert_ne!(ac1, ac2);

    // bars as printed, per line, identical for the two modules
    let expected_bars = [
        vec![(ZzInterval::new(0, 3), 1), (ZzInterval::new(1, 2), 1)],
        vec![(ZzInterval::new(0, 1), 1), (ZzInterval::new(0, 0), 1)],
        vec![(ZzInterval::new(0, 1), 1)],
    ];
    for (line, bars) in example_lines().iter().zip(expected_bars) {
        let b1 = line_barcode(&m1, line).unwrap();
        let b2 = line_barcode(&m_neg1, line).unwrap();
        assert_eq!(b1, b2, "fibered barcodes must agree");
        let expect: ZzBarcode = bars.into_iter().collect();
        assert_eq!(b1, expect, "printed bars");
    }
    assert!(started.elapsed().as_secs() < 5, "criterion 10 exceeded 5 s");
    pass(10, "two-parameter example reproduction", started);
}
