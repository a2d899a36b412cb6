use lmoment::coeffs::{delta_table, sym_square_table, zeta_like};
use lmoment::dirichlet::QuadratureSpec;
use lmoment::halasz::minimize;
use lmoment::mean_sums::{error_exponent_scan, geometric_grid, main_term_fit};
use lmoment::moments::{moment_experiment, trend_scan, MomentOptions, TRule};
use lmoment::ramare::{select_parameters, ParameterMode};

#[test]
fn desk_moment_with_excision_and_census() {
    // the census decomposes up to X e^{1/H}
    let table = delta_table(6800).unwrap();
    let options = MomentOptions {
        mode: ParameterMode::Desk { p: 3.0, q: 200.0, h: 2.0 },
        census_exponent: Some(1.0),
        lower_interval: true,
        weighted_alpha: Some(0.5),
        ..MomentOptions::default()
    };
    let rep = moment_experiment(&table, 4096, 400.0, &QuadratureSpec::default(), &options).unwrap();
    assert!(rep.integral.value > 0.0);
    assert!(rep.normalizations.within_ceiling);
    let ex = rep.excision.as_ref().unwrap();
    assert!(ex.value <= rep.integral.value * (1.0 + 1e-2), "{ex:?} vs {}", rep.integral.value);
    assert!(!rep.census.is_empty(), "{:?}", rep.warnings);
    for c in &rep.census {
        assert_eq!(c.small + c.large, c.grid_len);
    }
    assert!(rep.paper_ledger.unwrap().infeasible);
    assert!(!rep.selection.unwrap().infeasible);
    assert!(rep.lower_integral.is_some() && rep.weighted.is_some());
}

#[test]
fn paper_mode_is_infeasible_but_reports() {
    let table = sym_square_table(2048).unwrap();
    let rep = moment_experiment(&table, 2048, 64.0, &QuadratureSpec::default(), &MomentOptions::default()).unwrap();
    assert!(rep.selection.unwrap().infeasible);
    assert!(rep.census.is_empty());
    let s = select_parameters(2048.0, 3, ParameterMode::Paper).unwrap();
    assert_eq!(s.z, 2048f64.ln());
}

#[test]
fn halasz_agrees_with_moment_excision_centre() {
    let table = delta_table(2000).unwrap();
    let prof = minimize(&table, 2000, 1000.0, 1e-3).unwrap();
    let rep = moment_experiment(&table, 2000, 100.0, &QuadratureSpec::default(), &MomentOptions::default()).unwrap();
    assert_eq!(rep.excision.unwrap().t0, prof.t0);
}

#[test]
fn trend_on_fixed_t_grows_with_x() {
    let table = zeta_like(4096).unwrap();
    let rep = trend_scan(&table, &[512, 1024, 2048], TRule::Fixed { t: 50.0 }, &QuadratureSpec::default()).unwrap();
    assert!(rep.rows.windows(2).all(|w| w[1].integral > w[0].integral));
    assert!(rep.rows.iter().all(|r| r.over_2t_mvt <= 3.0));
}

#[test]
fn main_term_and_exponent_scan_on_delta() {
    let table = delta_table(200_000).unwrap();
    let grid = geometric_grid(1000, 200_000, 6);
    let fit = main_term_fit(&table, &grid).unwrap();
    assert!(fit.consistent, "gap {} vs uncertainty {}", fit.gap, fit.uncertainty);
    let scan = error_exponent_scan(&table, &grid, &fit).unwrap();
    assert!(scan.rows.iter().all(|r| r.block_sup <= r.envelope));
    assert!(scan.fitted_exponent.unwrap() < 0.6);
}
