//! Built-in verification suites: planted oracles, predicate sweeps, metric
//! axioms and the reference matcher, all with per-trial seeds derived from
//! one master seed so failures reproduce exactly.

use num_rational::Rational64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bipath_core::bipath::{
    BipathModule, BipathPoset, enumerate_intervals, plant_random, slice_restriction_bars,
};
use bipath_core::distance::{
    Block, XRat, block_deletion_cost, block_pair_cost, bottleneck_distance, bottleneck_matching,
    eps_interleaved, exhaustive_bottleneck, orbit_blocks,
};
use bipath_core::fibered::{
    build_example_mlambda, example_embedding, example_lines, fibered_arc_code, line_barcode,
};
use bipath_core::field::FieldSpec;
use bipath_core::zigzag::{DecKind, ZigzagShape, ZzBarcode, plant_random_rep};

use crate::Failure;

type SuiteResult = Result<(), String>;

fn gf(p: u32) -> FieldSpec {
    FieldSpec::new(p).expect("prime")
}

fn zigzag_plant_recover(seed: u64, trials: usize) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let sub = rng.next_u64();
        let field = gf(if t % 2 == 0 { 2 } else { 5 });
        let len = 1 + (sub % 25) as usize;
        let shape = ZigzagShape::alternating(len);
        let summands = (sub % 11) as usize;
        let (rep, planted) = plant_random_rep(&shape, field, summands, sub);
        let got = rep.barcode();
        if got != planted {
            return Err(format!(
                "trial {t} (seed {sub}): barcode differs from planted multiset"
            ));
        }
        for v in 0..len {
            if got.dim_at(v) != rep.dims[v] {
                return Err(format!("trial {t}: conservation fails at vertex {v}"));
            }
        }
    }
    Ok(())
}

fn bipath_plant_recover(seed: u64, trials: usize) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for t in 0..trials {
        let sub = rng.next_u64();
        let n = 2 + (sub % 4) as usize;
        let m = 1 + ((sub >> 8) % 4) as usize;
        let poset = BipathPoset::new(n, m).expect("valid");
        let field = gf(if t % 2 == 0 { 2 } else { 5 });
        let (module, planted) = plant_random(poset, field, 10, sub);
        let ac = module.arc_code().map_err(|e| format!("trial {t}: {e}"))?;
        if ac != planted {
            return Err(format!(
                "trial {t} (n={n}, m={m}): arc code differs from planted"
            ));
        }
        for v in 0..poset.vertex_count() {
            if ac.dim_at(&poset, v) != module.dims[v] {
                return Err(format!("trial {t}: conservation fails at vertex {v}"));
            }
        }
    }
    Ok(())
}

fn slice_geometry() -> SuiteResult {
    for n in 2..=5 {
        for m in 1..=4 {
            let poset = BipathPoset::new(n, m).expect("valid");
            if poset.slice_len() != 2 * n + 4 * m - 3 {
                return Err(format!("slice length wrong for n={n} m={m}"));
            }
            let period = poset.period() as i64;
            let window: Vec<(i64, i64)> = (-2 * period..=2 * period)
                .flat_map(|t| [(t, t), (t + 1, t)])
                .collect();
            for &(a, b) in &window {
                let v = poset.covering_vertex(a, b).map_err(|e| e.to_string())?;
                let w = poset
                    .covering_vertex(a + period, b + period)
                    .map_err(|e| e.to_string())?;
                if v != w {
                    return Err(format!("covering not periodic at ({a}, {b})"));
                }
            }
            for &(a, b) in &window {
                for &(c, d) in &window {
                    if a >= c && b <= d {
                        let u = poset.covering_vertex(a, b).map_err(|e| e.to_string())?;
                        let v = poset.covering_vertex(c, d).map_err(|e| e.to_string())?;
                        if !poset.le(u, v) {
                            return Err(format!(
                                "covering not order-preserving: ({a},{b}) <= ({c},{d})"
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn restriction_images() -> SuiteResult {
    for n in 2..=4 {
        for m in 1..=3 {
            let poset = BipathPoset::new(n, m).expect("valid");
            let field = gf(2);
            for iv in enumerate_intervals(&poset) {
                let module =
                    BipathModule::interval_module(poset, field, &iv).map_err(|e| e.to_string())?;
                let got = module
                    .restrict_to_slice()
                    .map_err(|e| e.to_string())?
                    .barcode();
                let mut expected = ZzBarcode::new();
                for dec in slice_restriction_bars(&poset, &iv) {
                    let range = dec
                        .to_range(poset.slice_offset(), poset.slice_len())
                        .ok_or_else(|| format!("{dec} outside slice for {iv}"))?;
                    expected.add(range, 1);
                }
                if got != expected {
                    return Err(format!("restriction of {iv} differs (n={n}, m={m})"));
                }
            }
        }
    }
    Ok(())
}

fn random_block(rng: &mut impl Rng) -> Block {
    let kind = match rng.random_range(0..4) {
        0 => DecKind::ClosedClosed,
        1 => DecKind::ClosedOpen,
        2 => DecKind::OpenClosed,
        _ => DecKind::OpenOpen,
    };
    let a = rng.random_range(-8..8);
    let min_w = if kind == DecKind::ClosedClosed { 0 } else { 1 };
    Block::from_ints(kind, a, a + rng.random_range(min_w..10))
}

fn cost_formula_sweeps(seed: u64, trials: usize) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb10c);
    let eighth = Rational64::new(1, 8);
    for t in 0..trials.max(100) {
        let x = random_block(&mut rng);
        let y = random_block(&mut rng);
        let claimed = if x.kind == y.kind {
            block_pair_cost(&x, &y)
        } else {
            block_deletion_cost(&x).max(block_deletion_cost(&y))
        };
        let check = |c: XRat, a: &Block, b: &Block| -> SuiteResult {
            match c {
                XRat::Fin(v) => {
                    if !eps_interleaved(a, b, v + eighth).map_err(|e| e.to_string())? {
                        return Err(format!("trial {t}: {a} vs {b} false above threshold {v}"));
                    }
                    if v > Rational64::from_integer(0)
                        && eps_interleaved(a, b, v - eighth).map_err(|e| e.to_string())?
                    {
                        return Err(format!("trial {t}: {a} vs {b} true below threshold {v}"));
                    }
                    Ok(())
                }
                _ => {
                    if eps_interleaved(a, b, Rational64::from_integer(1000))
                        .map_err(|e| e.to_string())?
                    {
                        return Err(format!("trial {t}: {a} vs {b} interleaved at 1000"));
                    }
                    Ok(())
                }
            }
        };
        check(claimed, &x, &y)?;
        check(block_deletion_cost(&x), &x, &Block::zero_module())?;
    }
    Ok(())
}

fn random_arc_code(
    poset: &BipathPoset,
    max: usize,
    rng: &mut impl Rng,
) -> bipath_core::bipath::ArcCode {
    let intervals = enumerate_intervals(poset);
    let mut ac = bipath_core::bipath::ArcCode::new();
    for _ in 0..rng.random_range(0..=max) {
        ac.add(intervals[rng.random_range(0..intervals.len())], 1);
    }
    ac
}

fn metric_axioms(seed: u64, trials: usize) -> SuiteResult {
    let poset = BipathPoset::new(3, 3).expect("valid");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xd157);
    for t in 0..trials.max(50) {
        let a = random_arc_code(&poset, 5, &mut rng);
        let b = random_arc_code(&poset, 5, &mut rng);
        let c = random_arc_code(&poset, 5, &mut rng);
        let daa = bottleneck_distance(&a, &a, &poset).map_err(|e| e.to_string())?;
        if daa != XRat::zero() {
            return Err(format!("trial {t}: d(A, A) = {daa}"));
        }
        let dab = bottleneck_distance(&a, &b, &poset).map_err(|e| e.to_string())?;
        let dba = bottleneck_distance(&b, &a, &poset).map_err(|e| e.to_string())?;
        if dab != dba {
            return Err(format!("trial {t}: asymmetric: {dab} vs {dba}"));
        }
        let dbc = bottleneck_distance(&b, &c, &poset).map_err(|e| e.to_string())?;
        let dac = bottleneck_distance(&a, &c, &poset).map_err(|e| e.to_string())?;
        if dac > XRat::add(&dab, &dbc) {
            return Err(format!(
                "trial {t}: triangle violated: {dac} > {dab} + {dbc}"
            ));
        }
        // type preservation on the realizing matching
        let (_, mr) = bottleneck_matching(&a, &b, &poset).map_err(|e| e.to_string())?;
        let oa = orbit_blocks(&a, &poset);
        let ob = orbit_blocks(&b, &poset);
        for &(i, j, _) in &mr.pairs {
            if oa[i].rep.kind != ob[j].rep.kind {
                return Err(format!("trial {t}: matching pairs distinct kinds"));
            }
        }
    }
    Ok(())
}

fn matcher_vs_exhaustive(seed: u64, trials: usize) -> SuiteResult {
    let poset = BipathPoset::new(3, 2).expect("valid");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xacc3);
    for t in 0..trials.max(25) {
        let a = random_arc_code(&poset, 6, &mut rng);
        let b = random_arc_code(&poset, 6, &mut rng);
        let fast = bottleneck_distance(&a, &b, &poset).map_err(|e| e.to_string())?;
        let slow = exhaustive_bottleneck(&a, &b, &poset).map_err(|e| e.to_string())?;
        if fast != slow {
            return Err(format!("trial {t}: matcher {fast} vs exhaustive {slow}"));
        }
    }
    Ok(())
}

fn example_reproduction() -> SuiteResult {
    let f5 = gf(5);
    let m1 = build_example_mlambda(f5, 1);
    let m_neg1 = build_example_mlambda(f5, 4);
    let f = example_embedding();
    let ac1 = fibered_arc_code(&m1, std::slice::from_ref(&f))
        .map_err(|e| e.to_string())?
        .remove(0);
    let ac2 = fibered_arc_code(&m_neg1, std::slice::from_ref(&f))
        .map_err(|e| e.to_string())?
        .remove(0);
    if ac1 == ac2 {
        return Err("arc codes of the two example modules coincide".into());
    }
    for line in example_lines() {
        let b1 = line_barcode(&m1, &line).map_err(|e| e.to_string())?;
        let b2 = line_barcode(&m_neg1, &line).map_err(|e| e.to_string())?;
        if b1 != b2 {
            return Err("line barcodes of the two example modules differ".into());
        }
    }
    Ok(())
}

pub fn run(seed: u64, trials: usize) -> Result<(), Failure> {
    let suites: Vec<(&str, SuiteResult)> = vec![
        (
            "zigzag plant-and-recover",
            zigzag_plant_recover(seed, trials),
        ),
        (
            "bipath plant-and-recover",
            bipath_plant_recover(seed, trials),
        ),
        ("slice geometry", slice_geometry()),
        ("restriction images", restriction_images()),
        ("cost formula sweeps", cost_formula_sweeps(seed, trials * 4)),
        ("metric axioms", metric_axioms(seed, trials)),
        (
            "matcher vs exhaustive",
            matcher_vs_exhaustive(seed, trials.div_ceil(2)),
        ),
        ("example reproduction", example_reproduction()),
    ];
    let mut failed = 0;
    for (name, result) in &suites {
        match result {
            Ok(()) => println!("{name:<28} PASS"),
            Err(msg) => {
                failed += 1;
                println!("{name:<28} FAIL: {msg}");
            }
        }
    }
    if failed > 0 {
        Err(Failure::validation(format!(
            "{failed} self-test suite(s) failed"
        )))
    } else {
        println!(
            "all {} suites passed (seed {seed}, trials {trials})",
            suites.len()
        );
        Ok(())
    }
}
