//! Reproduction targets. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::Instant;

use pipfract::daleth::{daleth_batch, finite_difference, sign_filter, DalethSpec, Series};
use pipfract::pip::{pip_levels, LevelRequest};
use pipfract::render::{render_gridplot, Colormap, Geometry, GridRow};
use pipfract::sieve::PrimeEngine;
use pipfract::stats::{
    correlation_matrix, count_zeros, excess_kurtosis, fit_gaussian, fit_laplace, histogram,
    mod6_dip_score, outlier_census, rolling_moments, zero_density_fit, FitParams, Normalization,
};

const T: u64 = 2500;
/// s = 0 rows are also needed at i + 19 for the shift comparison.
const SHIFT: u64 = 19;
/// Lowest sign-agreement fraction seen for k = 2..6 was 0.8608.
const SHIFT_AGREEMENT_MIN: f64 = 0.85;

type Outcome = Result<(bool, String), String>;

fn engine() -> &'static PrimeEngine {
    static E: OnceLock<PrimeEngine> = OnceLock::new();
    E.get_or_init(|| PrimeEngine::new(Default::default()).expect("default engine"))
}

/// PIP levels 0..=6 for s = 0 and s = 19 over i = 1..=T+19+2, sharing one
/// sieve pass per level.
struct Chains {
    s0: Vec<Vec<u64>>,
    s19: Vec<Vec<u64>>,
}

fn chains() -> &'static Chains {
    static C: OnceLock<Chains> = OnceLock::new();
    C.get_or_init(|| {
        let hi = T + SHIFT + 2;
        let mut levels = pip_levels(
            engine(),
            &[
                LevelRequest { s: 0, max_k: 6, i_lo: 1, i_hi: hi },
                LevelRequest { s: SHIFT, max_k: 6, i_lo: 1, i_hi: hi },
            ],
        )
        .expect("chains within the universe bound");
        let s19 = levels.pop().unwrap();
        let s0 = levels.pop().unwrap();
        Chains { s0, s19 }
    })
}

/// `ℸ^{2,k}_{1,s,i}` for i = first..first+len-1, from a chain starting at i = 1.
fn d2(chain: &[u64], first: u64, len: u64) -> Vec<i64> {
    let lo = (first - 1) as usize;
    let vals: Vec<i64> = chain[lo..lo + len as usize + 2].iter().map(|&v| v as i64).collect();
    finite_difference(&vals, 2, 1).unwrap()
}

fn d2_s0(k: u32) -> Vec<i64> {
    d2(&chains().s0[k as usize], 1, T)
}

fn read_csv(text: &str) -> Vec<Vec<u64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.trim().parse().unwrap()).collect())
        .collect()
}

fn table1() -> Outcome {
    let want = read_csv(include_str!("data/table1_pip.csv"));
    let levels = pip_levels(engine(), &[LevelRequest { s: 0, max_k: 8, i_lo: 1, i_hi: 20 }])
        .map_err(|e| e.to_string())?
        .pop()
        .unwrap();
    let mut matched = 0;
    let mut max = 0;
    for row in &want {
        let i = row[0] as usize;
        for k in 0..=8 {
            max = max.max(row[k + 1]);
            matched += (levels[k][i - 1] == row[k + 1]) as usize;
        }
    }
    Ok((matched == 180 && want.len() == 20, format!("{matched}/180 values exact, max {max}")))
}

fn table3() -> Outcome {
    let want = read_csv(include_str!("data/table3_shifted.csv"));
    let requests: Vec<LevelRequest> = (0..12)
        .map(|s| LevelRequest { s, max_k: 2, i_lo: 1, i_hi: 30 })
        .collect();
    let got = pip_levels(engine(), &requests).map_err(|e| e.to_string())?;
    let mut matched = 0;
    for row in &want {
        let i = row[0] as usize;
        for s in 0..12 {
            matched += (got[s][2][i - 1] == row[s + 1]) as usize;
        }
    }
    Ok((matched == 360 && want.len() == 30, format!("{matched}/360 values exact")))
}

fn census() -> Outcome {
    let c = outlier_census(engine(), 50, 1, 8, DalethSpec::new(1, 2, 0, 0)).map_err(|e| e.to_string())?;
    Ok((
        c.total == 7,
        format!("{} outliers in {} cells at {:?}; tied rows {:?}", c.total, c.cells, c.positions, c.tied_rows),
    ))
}

fn corr_table() -> Vec<Vec<f64>> {
    let cols: Vec<Vec<f64>> = (1..=6)
        .map(|k| d2_s0(k).into_iter().map(|v| v as f64).collect())
        .collect();
    correlation_matrix(&cols).unwrap()
}

fn correlation() -> Outcome {
    let m = corr_table();
    let n = m.len();
    let mut min = f64::MAX;
    let mut max_off = f64::MIN;
    for a in 0..n {
        for b in 0..n {
            min = min.min(m[a][b]);
            if a != b {
                max_off = max_off.max(m[a][b]);
            }
        }
    }
    // upper triangle: rows fall with k, columns fall as k decreases,
    // diagonals rise with k
    let mut trends = true;
    for a in 0..n {
        for b in a + 2..n {
            trends &= m[a][b] < m[a][b - 1];
        }
    }
    for b in 0..n {
        for a in 1..b {
            trends &= m[a - 1][b] < m[a][b];
        }
    }
    for d in 1..n {
        for a in 1..n - d {
            trends &= m[a - 1][a - 1 + d] < m[a][a + d];
        }
    }
    let pass = (min - 0.926).abs() <= 0.002 && (max_off - 0.999).abs() <= 0.002 && trends;
    Ok((pass, format!("min {min:.4}, max off-diagonal {max_off:.4}, trends hold: {trends}")))
}

fn correlation_smoke() -> Outcome {
    let m = corr_table();
    let min = (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).map(|(a, b)| m[a][b]).fold(f64::MAX, f64::min);
    Ok((min > 0.9, format!("k = 1..4 min r {min:.4}")))
}

fn endpoints() -> Outcome {
    let c = chains();
    let k6 = c.s0[6][T as usize - 1];
    let k1 = c.s0[1][T as usize - 1];
    let rows: Vec<GridRow> = (1..=6)
        .map(|k| GridRow {
            k,
            levels: d2_s0(k).iter().map(|v| v.signum()).collect(),
            q_range: Some((c.s0[k as usize][0], c.s0[k as usize][T as usize - 1])),
        })
        .collect();
    let img = render_gridplot(&rows, Colormap::Sign3, Geometry::default()).map_err(|e| e.to_string())?;
    let top = &img.meta[0];
    let pass = k6 == 27_256_077_217
        && k1 == 22_307
        && top.q_first == Some(127)
        && top.q_last == Some(27_256_077_217)
        && img.width == 2500
        && img.height == 6 * 48 - 8;
    Ok((pass, format!("q^6(2500) = {k6}, q^1(2500) = {k1}, image {}x{}", img.width, img.height)))
}

fn stationarization() -> Outcome {
    let (mut lo, mut hi) = (f64::MAX, f64::MIN);
    for k in 1..=6 {
        let s = sign_filter(&Series::from_values(d2_s0(k)));
        let r = rolling_moments(&s, 500, 100).map_err(|e| e.to_string())?;
        for row in &r.rows {
            lo = lo.min(row.variance);
            hi = hi.max(row.variance);
        }
    }
    Ok((lo >= 0.9 && hi <= 1.02, format!("variance range [{lo:.4}, {hi:.4}] over k = 1..6")))
}

fn leptokurtosis() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for k in 1..=6 {
        let x: Vec<f64> = d2_s0(k).into_iter().map(|v| v as f64).collect();
        let kurt = excess_kurtosis(&x).map_err(|e| e.to_string())?;
        let lap = fit_laplace(&x).map_err(|e| e.to_string())?.goodness;
        let gau = fit_gaussian(&x).map_err(|e| e.to_string())?.goodness;
        pass &= kurt > 0.0 && lap > gau;
        detail.push(format!("k{k}: kurt {kurt:.2}, dLL {:.1}", lap - gau));
    }
    Ok((pass, detail.join("; ")))
}

fn mod6_score(k: u32, t: u64) -> Result<f64, String> {
    let d = daleth_batch(engine(), &[DalethSpec::new(1, 2, 0, k)], 1, t).map_err(|e| e.to_string())?;
    let h = histogram(&d[0].as_f64(), 1.0, -50.0, 51.0, Normalization::Pdf).map_err(|e| e.to_string())?;
    mod6_dip_score(&h).map_err(|e| e.to_string())
}

fn mod6() -> Outcome {
    let plan = [(1, 10_000_000), (2, 1_000_000), (3, 1_000_000)];
    let mut pass = true;
    let mut detail = Vec::new();
    for (k, t) in plan {
        let score = mod6_score(k, t)?;
        pass &= score >= 0.8;
        detail.push(format!("k{k} T={t}: {score:.3}"));
    }
    Ok((pass, detail.join("; ")))
}

fn zero_density() -> Outcome {
    let t = 1_000_000;
    let fit = zero_density_fit(engine(), DalethSpec::new(1, 2, 0, 0), &[1, 2, 3], &[t, t, t])
        .map_err(|e| e.to_string())?;
    let FitParams::Exponential { a, b } = fit.fit.params else {
        return Err("unexpected fit kind".into());
    };
    let zeros: Vec<u64> = fit.points.iter().map(|p| p.zeros).collect();
    Ok((
        fit.fit.goodness >= 0.99 && fit.dropped.is_empty(),
        format!(
            "T={t}, zeros {zeros:?}, A={a:.4}, B={b:.4}, R2 log {:.5}, R2 linear {:.5}",
            fit.fit.goodness, fit.r_squared_linear
        ),
    ))
}

fn shift_identity() -> Outcome {
    // exact law at k = 1
    let mut exact = true;
    for s in [19u64, 249] {
        let lhs = daleth_batch(engine(), &[DalethSpec::new(1, 2, s, 1)], 1, 2000).map_err(|e| e.to_string())?;
        let rhs = daleth_batch(engine(), &[DalethSpec::new(1, 2, 0, 1)], 1 + s, 2000 + s)
            .map_err(|e| e.to_string())?;
        exact &= lhs[0].values == rhs[0].values;
    }
    let c = chains();
    let mut agree = Vec::new();
    for k in 2..=6 {
        let a = d2(&c.s19[k], 1, T);
        let b = d2(&c.s0[k], 1 + SHIFT, T);
        let same = a.iter().zip(&b).filter(|(x, y)| x.signum() == y.signum()).count();
        agree.push(same as f64 / T as f64);
    }
    let min = agree.iter().copied().fold(f64::MAX, f64::min);
    let list: Vec<String> = agree.iter().map(|f| format!("{f:.4}")).collect();
    Ok((
        exact && min >= SHIFT_AGREEMENT_MIN,
        format!("k=1 exact for s in {{19, 249}}: {exact}; k=2..6 sign agreement [{}]", list.join(", ")),
    ))
}

/// Plain sieve of Eratosthenes, independent of the engine.
fn naive_primes(limit: usize) -> Vec<u64> {
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for n in 2..=limit {
        if !composite[n] {
            out.push(n as u64);
            let mut m = n * n;
            while m <= limit {
                composite[m] = true;
                m += n;
            }
        }
    }
    out
}

fn oracles() -> Outcome {
    let primes = naive_primes(1_400_000);
    let indices: Vec<u64> = (1..=100_000).collect();
    let got = engine().resolve_indices(&indices).map_err(|e| e.to_string())?;
    let resolve_ok = got == primes[..100_000];
    let sparse: Vec<u64> = (1..=100_000).filter(|i| i % 7 == 3 || i % 1000 == 0).collect();
    let got = engine().resolve_indices(&sparse).map_err(|e| e.to_string())?;
    let sparse_ok = sparse.iter().zip(&got).all(|(&i, &p)| primes[i as usize - 1] == p);

    let t = 10_000;
    let balanced = (0..t).filter(|&i| 2 * primes[i + 1] == primes[i] + primes[i + 2]).count() as u64;
    let zeros = count_zeros(engine(), DalethSpec::new(1, 2, 0, 1), t as u64).map_err(|e| e.to_string())?;
    let zeros_ok = zeros == balanced;

    let data: Vec<i64> = primes[..400].iter().map(|&p| (p as i64) * ((p % 5) as i64 - 2)).collect();
    let mut fd_ok = true;
    for n in 0..=5 {
        let mut iter = data.clone();
        for _ in 0..n {
            iter = iter.windows(2).map(|w| w[1] - w[0]).collect();
        }
        fd_ok &= finite_difference(&data, n, 1).map_err(|e| e.to_string())? == iter;
    }
    let linear: Vec<i64> = (0..100).map(|i| -17 + 41 * i).collect();
    let annihilated = finite_difference(&linear, 2, 1).unwrap().iter().all(|&v| v == 0)
        && finite_difference(&linear, 2, 3).unwrap().iter().all(|&v| v == 0);

    Ok((
        resolve_ok && sparse_ok && zeros_ok && fd_ok && annihilated,
        format!(
            "resolve {resolve_ok}/{sparse_ok}, balanced primes {balanced} vs zeros {zeros}, \
             n-fold differences {fd_ok}, linear annihilated {annihilated}"
        ),
    ))
}

fn report_nested_mod6() {
    // first 10^7 primes gives T = 53909 at k = 3, about 8 counts per bin
    match mod6_score(3, 53_909) {
        Ok(score) => println!("INFO  mod-6 k3 at nested T=53909 (not gating): {score:.3}"),
        Err(e) => println!("INFO  mod-6 k3 at nested T=53909 failed: {e}"),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("table-1", table1),
        ("table-3", table3),
        ("outlier-census", census),
        ("correlation-extremes", correlation),
        ("correlation-smoke", correlation_smoke),
        ("fig7-endpoints", endpoints),
        ("sign-stationarization", stationarization),
        ("leptokurtosis", leptokurtosis),
        ("mod6-dips", mod6),
        ("zero-density", zero_density),
        ("shift-identity", shift_identity),
        ("oracle-suites", oracles),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let (pass, detail) = run().unwrap_or_else(|e| (false, format!("error: {e}")));
        failed += !pass as usize;
        println!(
            "{}  {name}: {detail} ({:.1}s)",
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    report_nested_mod6();
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
