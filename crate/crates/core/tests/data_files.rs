use periodpoly::analytic::{eta_product, NewformData};

const FILES: [(&str, &str); 5] = [
    ("gamma0_5_k4_eta", include_str!("../data/gamma0_5_k4_eta.json")),
    ("gamma0_2_k8_eta", include_str!("../data/gamma0_2_k8_eta.json")),
    ("gamma0_2_k10_a3_m156", include_str!("../data/gamma0_2_k10_a3_m156.json")),
    ("gamma0_2_k14_a3_1236", include_str!("../data/gamma0_2_k14_a3_1236.json")),
    ("gamma0_2_k14_a3_m1836", include_str!("../data/gamma0_2_k14_a3_m1836.json")),
];

#[test]
fn files_round_trip_byte_for_byte() {
    for (name, text) in FILES {
        let f = NewformData::from_json_str(text).unwrap();
        assert_eq!(f.to_json_string(), text, "{name}");
        assert!(f.is_normalized(), "{name}");
    }
}

#[test]
fn eta_files_match_the_product_expansion() {
    for (name, factors) in [("gamma0_5_k4_eta", [(1, 4), (5, 4)]), ("gamma0_2_k8_eta", [(1, 8), (2, 8)])] {
        let text = FILES.iter().find(|(n, _)| *n == name).unwrap().1;
        let f = NewformData::from_json_str(text).unwrap();
        assert_eq!(f.q, eta_product(&factors, 200).unwrap(), "{name}");
    }
}
