//! Solvers against exhaustive enumeration.

use gappath_core::oracle::{brute_chains_cells, brute_chains_points, exact_dist_gap_lis, exact_dist_lpp, ProbParam};
use gappath_core::solve::gap_lis_sorted;
use gappath_core::{
    gap_lis_discrete, lpp_geometric, sample_poisson, BitField, Gap, Intensity, LatticeGap, SeedSpec, Serial,
    WeightField,
};

const GAPS: [(u32, u32); 6] = [(1, 1), (2, 1), (1, 2), (1, 0), (0, 1), (2, 0)];

fn field_from_mask(m: usize, n: usize, mask: u32) -> BitField {
    let bits = (0..m * n).map(|r| (mask >> r & 1) as u8).collect();
    BitField::from_vec(m, n, bits).unwrap()
}

#[test]
fn discrete_solver_matches_brute_force_on_every_field() {
    for &(m, n) in &[(1, 5), (2, 3), (3, 3), (3, 4), (4, 3), (2, 6)] {
        for &(h1, h2) in &GAPS {
            let gap = LatticeGap::new(h1, h2).unwrap();
            for mask in 0u32..1 << (m * n) {
                let f = field_from_mask(m, n, mask);
                let fast = gap_lis_discrete(&f, gap, false).length;
                let slow = brute_chains_cells(&f, gap).unwrap();
                assert_eq!(fast, slow, "{m}x{n} gap ({h1},{h2}) mask {mask:#x}");
            }
        }
    }
}

#[test]
fn oracle_distribution_matches_solver_histogram() {
    // Fields are equally likely at p = 1/2, so each mass is count / 2^mn.
    let half = ProbParam::ratio(1, 2).unwrap();
    for &(m, n) in &[(4, 4), (2, 8), (3, 5)] {
        for &(h1, h2) in &GAPS {
            let gap = LatticeGap::new(h1, h2).unwrap();
            let cells = m * n;
            let mut hist = vec![0u64; cells + 1];
            for mask in 0u32..1 << cells {
                hist[gap_lis_discrete(&field_from_mask(m, n, mask), gap, false).length as usize] += 1;
            }
            let dist = exact_dist_gap_lis(m, n, half, gap, &Serial).unwrap();
            let support: Vec<u64> = (0..hist.len() as u64).filter(|&k| hist[k as usize] > 0).collect();
            assert_eq!(dist.support(), support);
            for (k, mass) in support.iter().zip(dist.masses()) {
                let expect = hist[*k as usize] as f64 / (1u64 << cells) as f64;
                assert_eq!(mass.to_f64(), expect, "{m}x{n} ({h1},{h2}) k={k}");
            }
        }
    }
}

#[test]
fn oracle_weights_configurations_by_probability() {
    let p: f64 = 1.0 / 3.0;
    let third = ProbParam::ratio(1, 3).unwrap();
    let (m, n) = (3, 4);
    for &(h1, h2) in &GAPS {
        let gap = LatticeGap::new(h1, h2).unwrap();
        let mut mass = vec![0.0; m * n + 1];
        for mask in 0u32..1 << (m * n) {
            let ones = mask.count_ones() as i32;
            let w = p.powi(ones) * (1.0 - p).powi((m * n) as i32 - ones);
            mass[gap_lis_discrete(&field_from_mask(m, n, mask), gap, false).length as usize] += w;
        }
        let dist = exact_dist_gap_lis(m, n, third, gap, &Serial).unwrap();
        for (k, got) in dist.support().into_iter().zip(dist.masses()) {
            assert!((got.to_f64() - mass[k as usize]).abs() < 1e-14);
        }
    }
}

#[test]
fn lpp_oracle_matches_weight_enumeration() {
    // Weights 0..=k_max enumerated directly; anything larger pushes T above k_max.
    let half = ProbParam::ratio(1, 2).unwrap();
    let (m, n, k_max) = (2, 3, 3u64);
    let base = k_max as u32 + 1;
    let mut cdf = vec![0.0; k_max as usize + 1];
    for code in 0..base.pow((m * n) as u32) {
        let mut c = code;
        let mut ws = Vec::new();
        for _ in 0..m * n {
            ws.push(c % base);
            c /= base;
        }
        let weight: f64 = ws.iter().map(|&w| 0.5f64.powi(w as i32 + 1)).product();
        let t = lpp_geometric(&WeightField::from_vec(m, n, ws).unwrap(), false).0.length;
        for k in t..=k_max {
            cdf[k as usize] += weight;
        }
    }
    let dist = exact_dist_lpp(m, n, half, k_max, &Serial).unwrap();
    for k in 0..=k_max {
        assert!((dist.cdf(k).to_f64() - cdf[k as usize]).abs() < 1e-15, "k={k}");
    }
}

#[test]
fn continuous_solver_matches_brute_force() {
    let gaps = [(0.0, 0.0), (1.0, 1.0), (0.5, 0.3), (2.0, 0.0), (0.0, 1.5)];
    let mut seen = 0;
    for s in 0..400u64 {
        let cloud = sample_poisson(4.0, 4.0, Intensity::new(0.4).unwrap(), SeedSpec::new(s, 0)).unwrap();
        if cloud.len() > 10 {
            continue;
        }
        seen += 1;
        for &(h1, h2) in &gaps {
            let gap = Gap::new(h1, h2).unwrap();
            let fast = gap_lis_sorted(cloud.points(), gap, false).length;
            let slow = brute_chains_points(cloud.points(), gap).unwrap();
            assert_eq!(fast, slow, "seed {s} gap ({h1},{h2})");
        }
    }
    assert!(seen > 200);
}
