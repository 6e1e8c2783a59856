use qcournot_demo::{equal_entropy_json, equilibrium_json, figure_json};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).expect("valid JSON")
}

#[test]
fn equilibrium_matches_known_point() {
    let v = parse(&equilibrium_json(1.0, 0.0, 0.5, 1.0).unwrap());
    assert!((v["x_star"]["x1"].as_f64().unwrap() - 0.0537831251197).abs() < 1e-12);
    assert!((v["x_star"]["x2"].as_f64().unwrap() - 0.146197691691).abs() < 1e-12);
    assert_eq!(v["method"], "closed_form");
}

#[test]
fn equilibrium_rejects_negative_gamma12() {
    let err = equilibrium_json(0.0, 0.0, -1.0, 1.0).unwrap_err();
    assert!(err.contains("gamma12"), "{err}");
}

#[test]
fn figure_columns_have_grid_length() {
    let v = parse(&figure_json("5", 1.0).unwrap());
    assert_eq!(v["figure"], "fig5_profit_diff");
    assert_eq!(v["x_column"], "dgamma");
    let series = v["series"].as_array().unwrap();
    assert_eq!(series.len(), 3);
    for s in series {
        assert_eq!(s["dgamma"].as_array().unwrap().len(), 601);
        assert_eq!(s["u1"].as_array().unwrap().len(), 601);
    }
    assert!(figure_json("9", 1.0).is_err());
}

#[test]
fn equal_entropy_rows_share_entropy() {
    let v = parse(&equal_entropy_json(0.5, "0, 1, 3", 1.0).unwrap());
    let s = v["entropy"].as_array().unwrap();
    assert_eq!(s.len(), 3);
    for e in s {
        assert!((e.as_f64().unwrap() - 0.5).abs() < 1e-10);
    }
    assert!(equal_entropy_json(0.5, "0,x", 1.0).is_err());
}
