use semiisac::scenario::{derive_constants, SystemConfig, DEFAULT_PRESET};
use semiisac::validate::{Profile, Validation, Verdict};

fn preset() -> SystemConfig {
    SystemConfig::preset(DEFAULT_PRESET).unwrap()
}

#[test]
fn quick_profile_passes_on_the_preset() {
    let report = Validation::new(preset(), Profile::Quick).run().unwrap();
    let mut csv = Vec::new();
    report.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    print!("{text}");
    assert!(text.starts_with("check,expected,got,tolerance,verdict\n"));
    assert!(
        report.passed(),
        "failures: {:?}",
        report.failures().collect::<Vec<_>>()
    );
}

#[test]
fn corrupted_constant_fails_by_name() {
    let cfg = preset();
    let mut k = derive_constants(&cfg).unwrap();
    k.a3 *= 1.001;
    let report = Validation::new(cfg, Profile::Quick)
        .with_constants(k)
        .run()
        .unwrap();
    assert!(!report.passed());
    let failed: Vec<_> = report.failures().map(|c| c.name.as_str()).collect();
    assert_eq!(failed, ["constants:a3"]);
    assert_eq!(report.find("constants:b3").unwrap().verdict, Verdict::Pass);
}

#[test]
fn profile_names() {
    assert_eq!("quick".parse::<Profile>().unwrap(), Profile::Quick);
    assert_eq!("full".parse::<Profile>().unwrap(), Profile::Full);
    assert!("fast".parse::<Profile>().is_err());
}
