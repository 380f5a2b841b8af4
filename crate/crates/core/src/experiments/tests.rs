use super::*;

#[test]
fn exact_power_laws() {
    let pts: Vec<(f64, f64)> = [2.0, 4.0, 8.0, 16.0].iter().map(|&x: &f64| (x, x * x)).collect();
    let fit = fit_log_slope(&pts).unwrap();
    assert!((fit.slope - 2.0).abs() < 1e-12);
    assert!(fit.stderr < 1e-12);
    let pts: Vec<(f64, f64)> = [3.0, 5.0, 7.0].iter().map(|&x: &f64| (x, 7.0 * x.powi(3))).collect();
    assert!((fit_log_slope(&pts).unwrap().slope - 3.0).abs() < 1e-12);
}

#[test]
fn zero_counts_are_dropped() {
    let pts = [(1.0, 0.0), (2.0, 4.0), (3.0, 9.0), (4.0, 16.0)];
    let fit = fit_log_slope(&pts).unwrap();
    assert_eq!(fit.dropped, vec![1.0]);
    assert_eq!(fit_log_slope(&pts[..3]), Err(Error::GridTooSmall(2)));
    assert_eq!(box_count_experiment(&[BoxKind::S1], &[], &SamplingPlan::exhaustive(), Some(0)), Err(Error::GridTooSmall(0)));
}

#[test]
fn exhaustive_slice_counts_match_brute_force() {
    let reports = box_count_experiment(&[BoxKind::S1], &[1, 2, 3], &SamplingPlan::exhaustive(), Some(0)).unwrap();
    for row in &reports[0].rows {
        let x = row.x as i64;
        let mut want = 0u64;
        let r = -x..=x;
        for a6 in r.clone() {
            for a5 in r.clone() {
                for a4 in r.clone() {
                    for a3 in r.clone() {
                        for a2 in r.clone() {
                            for a1 in r.clone() {
                                for a0 in r.clone() {
                                    let m = WeierstrassModel::from_i64(&[a0, a1, a2, a3, a4, a5, a6]);
                                    want += m.is_valid() as u64;
                                }
                            }
                        }
                    }
                }
            }
        }
        assert!(row.exact);
        assert_eq!(row.total, want as f64, "X = {x}");
        if x == 2 {
            break;
        }
    }
}

#[test]
fn sampling_is_deterministic() {
    let plan = SamplingPlan::uniform(3000, 11);
    let a = box_count_experiment(&[BoxKind::S1Square], &[20, 40, 80], &plan, None).unwrap();
    let b = box_count_experiment(&[BoxKind::S1Square], &[20, 40, 80], &plan, None).unwrap();
    assert_eq!(a[0].to_ndjson(), b[0].to_ndjson());
    let spec = BoxSpec::new(BoxKind::S1Square, 10).unwrap();
    assert_eq!(plan.draw(&spec), plan.draw(&spec));
    assert!(plan.draw(&spec).iter().all(|m| spec.contains(m)));
}

#[test]
fn sampled_and_exhaustive_fractions_agree() {
    let spec = BoxSpec::slice(BoxKind::S1, 2, 0).unwrap();
    let exact = spec.enumerate().filter(|(_, m)| square_leading(m)).count() as f64 / spec.enumerate().count() as f64;
    let sample = SamplingPlan::uniform(4000, 5).draw(&spec);
    let n = sample.len() as f64;
    let est = sample.iter().filter(|m| square_leading(m)).count() as f64 / n;
    let se = (exact * (1.0 - exact) / n).sqrt();
    assert!((est - exact).abs() < 3.0 * se, "exact {exact} sampled {est}");
}

#[test]
fn plan_parsing() {
    assert_eq!(SamplingPlan::parse("exhaustive", 3).unwrap(), SamplingPlan::exhaustive());
    assert_eq!(SamplingPlan::parse("uniform:50", 3).unwrap(), SamplingPlan::uniform(50, 3));
    assert!(SamplingPlan::parse("uniform:x", 3).is_err());
    assert!(SamplingPlan::parse("grid", 3).is_err());
}

#[test]
fn xa_small_cases() {
    let r = xa_family_experiment(10, 0).unwrap();
    assert_eq!(r.squarefree_count, 7);
    assert!(xa_family_experiment(0, 0).is_err());
    let xs = xa_abscissae(20);
    let sq = SquareTest::new();
    // y^2 = x^5 + 1: infinity, (-1, 0), (0, +-1), (2, +-sqrt 33) not rational
    assert_eq!(xa_points(1, &xs, &sq, u64::MAX), 4);
    // y^2 = x^5 + 7: (2, +-sqrt 39) no; (-1, +-sqrt 6) no
    assert!(xa_abscissae(4).contains(&(1, 4)));
}

#[test]
fn csv_has_expected_columns() {
    let reports = box_count_experiment(&[BoxKind::S1], &[1, 2, 3], &SamplingPlan::exhaustive(), Some(0)).unwrap();
    let mut buf = Vec::new();
    write_csv(&reports, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "box,X,total,square_leading,torsion,nontorsion,undecided,slope,stderr");
    assert_eq!(lines.count(), 3);
}

#[test]
fn torsion_density_exhaustive_slice() {
    let plan = SamplingPlan::exhaustive();
    let rep = torsion_density_experiment(&[1, 2], &plan, Some(0), None).unwrap();
    for row in &rep.rows {
        let t = row.tally.as_ref().unwrap();
        assert_eq!(t.torsion + t.nontorsion + t.undecided, t.total);
    }
}
