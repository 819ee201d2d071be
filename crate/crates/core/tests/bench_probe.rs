// temporary timing probe; removed once pivot-rule choice is settled
use momentmatch::dist::{sample, smooth, DistributionSpec};
use momentmatch::geom::{Halfspace, HalfspaceFunction, LabeledSample};
use momentmatch::learner::fit_l1_with_rule;
use momentmatch::lp::PivotRule;
use momentmatch::rng;
use rand::Rng as _;
use rand_distr::StandardNormal;
use std::time::Instant;

fn make_data(spec: &DistributionSpec, seed: u64, count: usize) -> Vec<LabeledSample> {
    let n = spec.dim();
    let mut r = rng::seeded(seed);
    let mk_h = |r: &mut rng::Rng| {
        let mut w: Vec<f64> = (0..n).map(|_| r.sample::<f64, _>(StandardNormal)).collect();
        let norm: f64 = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        for v in w.iter_mut() {
            *v /= norm;
        }
        Halfspace::new(w, 0.0).unwrap()
    };
    let f = HalfspaceFunction::intersection(vec![mk_h(&mut r), mk_h(&mut r)]).unwrap();
    let pts = sample(spec, seed ^ 0xAA, count).unwrap();
    pts.into_iter()
        .map(|p| {
            let y = f.eval(&p).unwrap();
            LabeledSample::new(p, y).unwrap()
        })
        .collect()
}

#[test]
#[ignore]
fn timing_probe() {
    // criterion-1 shape: n=4, d=1, N=4000
    let g4 = DistributionSpec::StandardGaussian { n: 4 };
    let train = make_data(&g4, 1, 4000);
    for rule in [PivotRule::Bland, PivotRule::DantzigThenBland] {
        let t0 = Instant::now();
        let fit = fit_l1_with_rule(&train, 1, rule).unwrap();
        println!(
            "n=4 d=1 N=4000 {:?}: {:.2}s obj {:.4}",
            rule,
            t0.elapsed().as_secs_f64(),
            fit.objective
        );
    }
    // criterion-2 shape: n=3, d=6 (B=84), N=4000
    let b3 = DistributionSpec::UniformBall { n: 3 };
    let train = make_data(&b3, 2, 4000);
    for rule in [PivotRule::Bland] {
        let t0 = Instant::now();
        let fit = fit_l1_with_rule(&train, 6, rule).unwrap();
        println!(
            "n=3 d=6 N=4000 {:?}: {:.2}s obj {:.4}",
            rule,
            t0.elapsed().as_secs_f64(),
            fit.objective
        );
    }
    // criterion-4 shape: n=6 smoothed rademacher, d=4 (B=210) and d=6 (B=924), N=2000
    let r6 = smooth(&DistributionSpec::RademacherCube { n: 6 }, 0.5).unwrap();
    let train = make_data(&r6, 3, 2000);
    for d in [4u32, 6] {
        for rule in [PivotRule::Bland] {
            let t0 = Instant::now();
            let fit = fit_l1_with_rule(&train, d, rule).unwrap();
            println!(
                "n=6 d={d} N=2000 {:?}: {:.2}s obj {:.4}",
                rule,
                t0.elapsed().as_secs_f64(),
                fit.objective
            );
        }
    }
}

#[test]
#[ignore]
fn criterion4_accuracy_probe() {
    use momentmatch::learner::{agnostic_learn, evaluate};
    let r6 = smooth(&DistributionSpec::RademacherCube { n: 6 }, 0.5).unwrap();
    for train_n in [4000usize] {
        let t0 = Instant::now();
        let mut best_errs = Vec::new();
        for seed in 0..4u64 {
            let data = make_data(&r6, 1000 + seed, train_n + 4000);
            let (train, test) = data.split_at(train_n);
            let mut best = f64::INFINITY;
            for d in 1..=6u32 {
                let td = Instant::now();
                let h = agnostic_learn(train, d).unwrap();
                let err = evaluate(&h, test).unwrap();
                println!("  seed {seed} d={d}: err {err:.4} ({:.1}s)", td.elapsed().as_secs_f64());
                best = best.min(err);
            }
            best_errs.push(best);
        }
        println!(
            "train={train_n}: best errors {:?} ({:.1}s total)",
            best_errs
                .iter()
                .map(|e| format!("{e:.3}"))
                .collect::<Vec<_>>(),
            t0.elapsed().as_secs_f64()
        );
    }
}
