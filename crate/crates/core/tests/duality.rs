use tfcm::lattice::{Color, Lattice, SiteString};
use tfcm::model::{self, ModelParams, Parity};
use tfcm::pauli::{CliffordMap, PauliString, PauliSum};

fn zbar(n: usize, labels: &[usize]) -> PauliString {
    let mask = labels.iter().fold(0u64, |m, l| m | 1 << (l - 1));
    PauliString::from_masks(n, 0, mask, 0).unwrap()
}

#[test]
fn line_halves_map_to_ising_chains() {
    for n in [4, 6, 8, 10, 12] {
        let lat = Lattice::line(n).unwrap();
        let map = model::duality_1d(n).unwrap();
        assert!(map.check_canonical().passed());
        for b in [0.0, 0.4, 1.0, 2.5] {
            let p = ModelParams::new(b).unwrap();
            for color in [Color::Red, Color::Blue] {
                let dual = map.conjugate_sum(&model::sublattice_ham(&lat, p, color)).unwrap();
                assert_eq!(dual, model::dual_tfim_expected(n, p, color).unwrap(), "n={n} B={b} {color}");
            }
        }
    }
}

#[test]
fn red_dual_written_out_for_six_sites() {
    // -Z2 - Z2 Z4 - Z4 Z6 - B (X2 + X4 + X6), labels 1-based
    let b = 0.5;
    let want = PauliSum::parse(
        6,
        "-1 + Z1\n-1 + Z1 Z3\n-1 + Z3 Z5\n-0.5 + X1\n-0.5 + X3\n-0.5 + X5\n",
    )
    .unwrap();
    assert_eq!(model::dual_tfim_expected(6, ModelParams::new(b).unwrap(), Color::Red).unwrap(), want);
}

#[test]
fn order_strings_become_ising_correlators() {
    let n = 12;
    let lat = Lattice::line(n).unwrap();
    let map = model::duality_1d(n).unwrap();
    for (i, j) in [(1, 2), (1, 6), (2, 5), (3, 4)] {
        let even = model::order_string_1d(&lat, i, j, Parity::Even).unwrap();
        assert_eq!(map.conjugate(&even).unwrap(), zbar(n, &[2 * i - 1, 2 * j - 1]));
        let odd = model::order_string_1d(&lat, i, j, Parity::Odd).unwrap();
        assert_eq!(map.conjugate(&odd).unwrap(), zbar(n, &[2 * i, 2 * j]));
    }
}

#[test]
fn self_duality_exchanges_field_and_coupling() {
    let lattices = [4, 6, 8, 10, 12]
        .map(|n| Lattice::line(n).unwrap())
        .into_iter()
        .chain([Lattice::square(3, 3).unwrap(), Lattice::square(3, 4).unwrap()]);
    for lat in lattices {
        let map = model::self_duality_map(&lat).unwrap();
        assert!(map.check_canonical().passed());
        for b in [0.25, 0.5, 2.0, 4.0] {
            let lhs = map.conjugate_sum(&model::tfcm(&lat, ModelParams::new(b).unwrap())).unwrap();
            let rhs = model::tfcm(&lat, ModelParams::new(1.0 / b).unwrap()).scaled(b);
            assert_eq!(lhs, rhs, "{} B={b}", lat.spec());
        }
    }
}

#[test]
fn square_duality_is_canonical_and_invertible() {
    for (r, c) in [(2, 2), (3, 3), (3, 4), (4, 4), (4, 5), (5, 5)] {
        let lat = Lattice::square(r, c).unwrap();
        let map = model::duality_2d(&lat).unwrap();
        assert!(map.check_canonical().passed(), "{r}x{c}");
        let back = CliffordMap::compose(&map.inverse().unwrap(), &map).unwrap();
        assert_eq!(back, CliffordMap::identity(lat.n()).unwrap());
    }
}

#[test]
fn interior_stabilizers_become_plaquettes() {
    for (r, c) in [(3, 3), (3, 4), (4, 4), (5, 5)] {
        let lat = Lattice::square(r, c).unwrap();
        let map = model::duality_2d(&lat).unwrap();
        for mu in 0..lat.n() {
            if lat.neighbors(mu).len() == 4 {
                let image = map.conjugate(&model::stabilizer(&lat, mu).unwrap()).unwrap();
                let want = PauliString::from_masks(lat.n(), 0, lat.neighbor_mask(mu), 0).unwrap();
                assert_eq!(image, want, "{r}x{c} site {}", lat.label(mu));
            }
        }
    }
}

#[test]
fn boundary_adapted_lattices_have_pure_z_images() {
    for (r, c) in [(3, 4), (4, 5), (2, 3)] {
        let lat = Lattice::square(r, c).unwrap();
        assert!(model::boundary_adapted(&lat));
        let map = model::duality_2d(&lat).unwrap();
        for mu in 0..lat.n() {
            let image = map.conjugate(&model::stabilizer(&lat, mu).unwrap()).unwrap();
            assert_eq!(image.x_mask(), 0, "{r}x{c} site {}", lat.label(mu));
        }
    }
}

#[test]
fn three_by_three_has_a_pure_x_stabilizer_product() {
    // K(1,2) K(2,1) K(2,3) K(3,2) = X on the four edge midpoints: no duality that
    // keeps X_mu -> X'_mu can send all four to Z' strings.
    let lat = Lattice::square(3, 3).unwrap();
    let sites = [(1, 2), (2, 1), (2, 3), (3, 2)].map(|(r, c)| lat.grid_site(r, c).unwrap());
    let product = sites
        .iter()
        .fold(PauliString::identity(9).unwrap(), |acc, &q| acc.mul(&model::stabilizer(&lat, q).unwrap()).unwrap());
    assert_eq!(product.z_mask(), 0);
    assert_eq!(product.weight(), 4);
    assert!(!model::boundary_adapted(&lat));
}

#[test]
fn plaquette_decomposition_accounts_for_every_term() {
    let p = ModelParams::new(0.8).unwrap();
    for (r, c) in [(3, 3), (3, 4), (4, 4)] {
        let lat = Lattice::square(r, c).unwrap();
        for color in [Color::Red, Color::Blue] {
            let d = model::plaquette_decomposition(&lat, p, color).unwrap();
            assert!(d.bulk_matches);
            assert_eq!(d.bulk.plus(&d.boundary).unwrap(), d.dual);
            let boundary_stabilizers = lat
                .sites_of(color.other())
                .into_iter()
                .filter(|&q| lat.neighbors(q).len() < 4)
                .count();
            assert_eq!(d.boundary.len(), boundary_stabilizers);
        }
    }
}

#[test]
fn interior_diagonal_string_becomes_four_corner_z() {
    let lat = Lattice::square(5, 5).unwrap();
    let start = lat.grid_site(2, 2).unwrap();
    let s = lat.diagonal_string(start, 2, (1, 1)).unwrap();
    let op = model::order_string_2d(&lat, &s).unwrap();
    let image = model::duality_2d(&lat).unwrap().conjugate(&op).unwrap();
    let ends = [(1, 2), (2, 1), (4, 5), (5, 4)]
        .iter()
        .fold(0u64, |m, &(r, c)| m | 1 << lat.grid_site(r, c).unwrap());
    assert_eq!(image, PauliString::from_masks(lat.n(), 0, ends, 0).unwrap());
    let broken = SiteString {
        sites: vec![s.sites[0], s.sites[2]],
        color: s.color,
    };
    assert!(model::order_string_2d(&lat, &broken).is_err());
}
