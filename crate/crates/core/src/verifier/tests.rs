use super::*;
use crate::covering::{validate_covering, Covering};
use crate::moduli::EndpointValues;
use crate::testing::encloses_decimal;

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).unwrap()
}

fn bx(p: (f64, f64), s: (f64, f64)) -> ModuliBox {
    ModuliBox::new(iv(p.0, p.1), iv(s.0, s.1), 0).unwrap()
}

// g(p, s) at the binary values of the decimals below, 40-digit mpmath.
const G_1_2_HALF: &str = "0.002849002947336711290209831";
const G_1_5_HALF: &str = "0.00304749464738239235836182";

// 2^-24, small enough to reach into the Theorem's exclusion box
const TINY_MARGIN: f64 = 5.960464477539063e-8;

const HALF_SQRT3: &str = "0.8660254037844386467637231707529361834714";
const HALF_CBRT7: &str = "0.9564655913861945505995584197743801414312";

#[test]
fn g_vanishes_on_the_p2_fiber() {
    for s in [(0.1, 0.2), (0.45, 0.55), (0.9, 0.95)] {
        let g = g_bound(&bx((2.0, 2.0), s), 1e-12).unwrap();
        assert!(g.contains_zero(), "{g:?}");
        assert!(g.width() < 1e-2, "{g:?}");
    }
}

#[test]
fn g_positive_at_interior_points() {
    for (p, s, want) in [(1.2, 0.5, G_1_2_HALF), (1.5, 0.5, G_1_5_HALF)] {
        let g = g_bound(&bx((p, p), (s, s)), 1e-12).unwrap();
        assert!(g.lo() > 0.0);
        assert!(encloses_decimal(&g, want), "{g:?} vs {want}");
        assert!(g.width() < 1e-9);
    }
}

#[test]
fn g_at_sigma_one_for_p3_contains_zero() {
    // Δ(3,1) < Δ(3,σ_3) = 7^{1/3}/2, so the endpoint min is attained at s = 0
    let ends = EndpointValues::new(&Interval::point(3.0), 1e-12).unwrap();
    assert!(ends.delta_at_1.hi() < ends.delta_at_sp.lo());
    let g = g_bound(&bx((3.0, 3.0), (0.0, 0.0)), 1e-12).unwrap();
    assert!(g.contains_zero(), "{g:?}");
}

#[test]
fn g_bound_encloses_point_values_inside_box() {
    let b = bx((1.3, 1.31), (0.4, 0.5));
    let g = g_bound(&b, 1e-10).unwrap();
    for (p, s) in [(1.3, 0.4), (1.305, 0.45), (1.31, 0.5), (1.3, 0.5)] {
        let at = g_bound(&bx((p, p), (s, s)), 1e-12).unwrap();
        assert!(at.overlaps(&g), "{at:?} outside {g:?}");
    }
}

#[test]
fn classify_examples() {
    let defaults = Campaign::new(iv(1.1, 1.2), iv(0.1, 0.2)).exclusions;
    // inside the Theorem's box: σ ≥ d needs s above 0.9999993 near p = 2
    let inside = bx((2.000001, 2.000002), (0.9999995, 1.0));
    assert!(inside.sigma.lo() >= THEOREM_D);
    assert_eq!(classify(&inside, &defaults, 1e-10).status, Status::Excluded);

    let straddle = bx((1.999, 2.001), (0.4, 0.5));
    assert_eq!(classify(&straddle, &[], 1e-10).status, Status::Indeterminate);

    let good = classify(&bx((1.3, 1.31), (0.4, 0.5)), &[], 1e-10);
    assert_eq!(good.status, Status::ProvenPositive);
    assert!(good.g_enclosure.unwrap().lo() > 0.0);
}

#[test]
fn small_campaign_proves_quickly() {
    let c = Campaign::new(iv(1.3, 1.31), iv(0.4, 0.5)).max_depth(4);
    let cert = verify(&c);
    assert!(cert.is_complete());
    assert_eq!(cert.summary.proven, cert.cells.len());
}

#[test]
fn degenerate_campaign_is_one_cell() {
    let c = Campaign::new(iv(1.2, 1.2), iv(0.5, 0.5));
    c.validate().unwrap();
    let cert = verify(&c);
    assert_eq!(cert.cells.len(), 1);
    assert_eq!(cert.cells[0].status, Status::ProvenPositive);
    let csv = cert.to_csv();
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 2);
}

#[test]
fn straddling_p2_is_never_proven() {
    let c = Campaign::new(iv(1.98, 2.02), iv(0.3, 0.6)).max_depth(6).exclusions(vec![]);
    let cert = verify(&c);
    let hits: Vec<_> = cert.cells.iter().filter(|c| c.bx.p.contains(2.0)).collect();
    assert!(!hits.is_empty());
    assert!(hits.iter().all(|c| c.status == Status::Indeterminate));
}

#[test]
fn exclusions_are_respected() {
    let margins = Margins { s_hi: TINY_MARGIN, ..Margins::default() };
    let c = Campaign::new(iv(1.999, 2.001), iv(0.9, 1.0 - TINY_MARGIN))
        .margins(margins)
        .max_depth(10)
        .exclusions(vec![Exclusion::theorem(THEOREM_D)]);
    c.validate().unwrap();
    let cert = verify(&c);
    let ex = Exclusion::theorem(THEOREM_D);
    assert!(cert.summary.excluded > 0);
    for cell in &cert.cells {
        if cell.status == Status::ProvenPositive {
            assert!(!ex.meets(&cell.bx), "{cell:?}");
        }
        if cell.status == Status::Excluded {
            assert!(ex.meets(&cell.bx));
        }
    }
}

fn leaf_covering(cert: &Certificate) -> Covering {
    let c = &cert.campaign;
    let domain = crate::covering::ICell::new(vec![c.p_range, c.s_range]);
    Covering::new(cert.cells.iter().map(VerdictCell::cell).collect(), domain).unwrap()
}

#[test]
fn leaves_partition_the_campaign() {
    let c = Campaign::new(iv(1.95, 2.05), iv(0.1, 0.9)).max_depth(7);
    let cert = verify(&c);
    let report = validate_covering(&leaf_covering(&cert));
    assert!(report.is_valid(), "{report:?}");
    let s = &cert.summary;
    assert_eq!(s.proven + s.indeterminate + s.excluded, cert.cells.len());
    assert!(s.proven > 0 && s.excluded > 0);
}

#[test]
fn leaves_are_sorted_and_rerun_is_identical() {
    let c = Campaign::new(iv(1.4, 1.6), iv(0.05, 0.95)).max_depth(6);
    let a = verify(&c);
    let b = verify(&c);
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.to_csv(), b.to_csv());
    let keys: Vec<_> = a.cells.iter().map(|c| (c.bx.p.lo(), c.bx.p.hi(), c.bx.s.lo(), c.bx.s.hi())).collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
}

fn proven_area(cert: &Certificate) -> f64 {
    cert.cells.iter().filter(|c| c.status == Status::ProvenPositive).map(|c| c.cell().measure()).sum()
}

#[test]
fn proven_area_grows_with_depth() {
    let base = Campaign::new(iv(1.1, 1.3), iv(0.05, 0.3));
    let areas: Vec<f64> = [4, 6, 8].iter().map(|&d| proven_area(&verify(&base.clone().max_depth(d)))).collect();
    assert!(areas.windows(2).all(|w| w[0] <= w[1] * (1.0 + 1e-12)), "{areas:?}");
}

#[test]
fn json_and_csv_agree() {
    let c = Campaign::new(iv(1.45, 1.55), iv(0.2, 0.4)).max_depth(5);
    let cert = verify(&c);
    let file: CertificateFile = serde_json::from_str(&cert.to_json()).unwrap();
    let csv = csv_records(&cert.to_csv()).unwrap();
    assert_eq!(file.cells, csv);
    assert_eq!(file.cells, cert.records());
    assert_eq!(file.summary, cert.summary);
    assert_eq!(file.header.campaign, c);
    assert_eq!(file.summary.seconds, None);
}

#[test]
fn campaign_validation() {
    let ok = Campaign::new(iv(1.1, 1.5), iv(0.05, 0.95));
    assert_eq!(ok.validate(), Ok(()));
    assert!(matches!(Campaign::new(iv(1.0, 1.5), iv(0.1, 0.2)).validate(), Err(CampaignError::PRange(_))));
    assert!(matches!(Campaign::new(iv(1.1, 1.5), iv(0.0, 0.5)).validate(), Err(CampaignError::SRange { .. })));
    assert!(matches!(ok.clone().tau_tol(0.0).validate(), Err(CampaignError::TauTol(_))));
    assert!(matches!(ok.clone().max_depth(DEPTH_LIMIT + 1).validate(), Err(CampaignError::Depth(_))));
    let bad = Margins { s_lo: 0.0, ..Margins::default() };
    assert_eq!(ok.margins(bad).validate(), Err(CampaignError::Margins));
}

#[test]
fn envelope_on_the_constant_fiber() {
    let opts = EnvelopeOptions { tol: 1e-8, ..Default::default() };
    let e = envelope_min(&Interval::point(2.0), &opts).unwrap();
    assert!(e.converged);
    assert!(encloses_decimal(&e.enclosure, HALF_SQRT3), "{e:?}");
    assert!(e.enclosure.width() <= 1e-8);
}

#[test]
fn envelope_is_below_the_endpoint_values() {
    let p = Interval::point(1.5);
    let e = envelope_min(&p, &EnvelopeOptions::default()).unwrap();
    let ends = EndpointValues::new(&p, 1e-12).unwrap();
    assert!(e.enclosure.lo() <= ends.endpoint_min.hi());
    // the minimum is attained at σ = 1 here
    assert!(e.enclosure.overlaps(&ends.delta_at_1));
}

#[test]
fn envelope_tightens_with_tolerance() {
    let p = Interval::point(2.5);
    let widths: Vec<f64> = [1e-4, 1e-6, 1e-8]
        .iter()
        .map(|&tol| envelope_min(&p, &EnvelopeOptions { tol, ..Default::default() }).unwrap().enclosure.width())
        .collect();
    assert!(widths.windows(2).all(|w| w[1] <= w[0]), "{widths:?}");
}

#[test]
fn point_report_examples() {
    let r = point_report(2.0, SigmaSpec::Value(1.0), 1e-12).unwrap();
    assert!(encloses_decimal(&r.delta, HALF_SQRT3));
    assert!(r.delta.width() <= 1e-10);
    let r = point_report(3.0, SigmaSpec::SigmaP, 1e-12).unwrap();
    assert!(r.tau.contains(0.0));
    assert!(encloses_decimal(&r.delta, HALF_CBRT7));
    assert!(point_report(1.0, SigmaSpec::Value(1.0), 1e-12).is_err());
    assert!(point_report(2.0, SigmaSpec::Value(1.8), 1e-12).is_err());
    assert!(point_report(2.0, SigmaSpec::Value(0.9), 1e-12).is_err());
}
