use kapteyn_core::series::convergence_level;
use kapteyn_core::SeriesSpec;
use num_complex::Complex64;
use std::path::PathBuf;

fn shipped() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut out: Vec<(String, String)> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "conf"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    out
}

#[test]
fn shipped_configs_parse_and_evaluate() {
    let configs = shipped();
    assert!(configs.len() >= 7);
    for (name, text) in configs {
        let spec: SeriesSpec = text.parse().unwrap_or_else(|e| panic!("{name}: {e}"));
        let n = SeriesSpec::config_degree(&text).unwrap().unwrap_or_else(|| panic!("{name}: no n"));
        let v = spec.section(n).unwrap().eval(Complex64::new(0.3, 0.2));
        assert!(v.re.is_finite() && v.im.is_finite(), "{name}");
        let again: SeriesSpec = spec.to_config().parse().unwrap();
        assert_eq!(again, spec, "{name}");
    }
}

#[test]
fn configured_levels_are_recovered() {
    for (name, text) in shipped() {
        let spec: SeriesSpec = text.parse().unwrap();
        if let Some(level) = spec.level {
            let est = convergence_level(&spec, 256).unwrap();
            assert!((est / level - 1.0).abs() < 0.1, "{name}: {est} vs {level}");
        }
    }
}
