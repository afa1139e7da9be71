use flagcert::certificate::{K112_CERTIFICATE, K112_PRINTED_CERTIFICATE, PAW_CERTIFICATE, PAW_PRINTED_CERTIFICATE};
use flagcert::graph::parse_graph;
use flagcert::rational::ratio;
use flagcert::Certificate;

#[test]
fn paw_certificate_is_accepted() {
    let cert = Certificate::load(PAW_CERTIFICATE).unwrap();
    assert_eq!(cert.bound, ratio(1, 32));
    let report = cert.verify().unwrap();
    assert_eq!(report.classes.len(), 34);
    assert!(report.non_psd_blocks().is_empty());
    assert!(report.failing_classes().is_empty());
    assert!(report.accepted);
}

#[test]
fn printed_paw_block_fails_on_the_empty_graph() {
    let report = Certificate::load(PAW_PRINTED_CERTIFICATE).unwrap().verify().unwrap();
    assert!(!report.accepted);
    assert!(report.non_psd_blocks().is_empty());
    let empty = parse_graph("{}_{5, 0}").unwrap();
    let failing = report.failing_classes();
    assert!(failing.contains(&(empty, ratio(-1, 96))));
}

#[test]
fn k112_certificate_is_accepted() {
    let cert = Certificate::load(K112_CERTIFICATE).unwrap();
    assert_eq!(cert.bound, ratio(12, 125));
    let report = cert.verify().unwrap();
    assert_eq!(report.classes.len(), 1044);
    assert!(report.non_psd_blocks().is_empty());
    assert!(report.failing_classes().is_empty());
    assert!(report.accepted);
}

#[test]
fn printed_k112_blocks_are_not_psd() {
    let report = Certificate::load(K112_PRINTED_CERTIFICATE).unwrap().verify().unwrap();
    assert!(!report.accepted);
    assert_eq!(report.non_psd_blocks(), vec![4, 5]);
}
