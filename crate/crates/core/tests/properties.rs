use proptest::prelude::*;

use cuspdist::angle::RationalAngle;
use cuspdist::character::{Coeff, CyclicCharacter};
use cuspdist::finite::{CuspidalRepFF, QuadResidueExt};
use cuspdist::harness::GridSpec;
use cuspdist::padic::{
    classify, is_distinguished_level0, mu_distinguished, r_and_support, twist_by_tame, Classification,
    LevelZeroCuspidalDatum, TameCharacter,
};

fn coeff_for(q0: u64, pick: usize) -> Coeff {
    let ells = [2u64, 3, 5, 7, 13];
    match pick % 6 {
        5 => Coeff::Zero,
        i if ells[i] == q0 => Coeff::Zero,
        i => Coeff::Mod(ells[i]),
    }
}

prop_compose! {
    fn datum()(
        q0 in prop::sample::select(vec![3u64, 5, 7]),
        ramified in any::<bool>(),
        n in 1u64..=4,
        pick in 0usize..6,
        seed in any::<u64>(),
        num in 0u128..24,
        den in prop::sample::select(vec![1u128, 2, 3, 4, 6, 8]),
    ) -> Option<LevelZeroCuspidalDatum> {
        let ext = QuadResidueExt::new(q0, ramified).ok()?;
        let coeff = coeff_for(q0, pick);
        let m = CyclicCharacter::trivial(ext.q(), n, coeff).ok()?.modulus();
        let angle = RationalAngle::new(num % den, den).ok()?.reduce(coeff);
        let w = CuspidalRepFF::from_exponent(ext.q(), n, coeff, seed as u128 % m).ok()?;
        LevelZeroCuspidalDatum::new(ext, n, coeff, w, angle).ok()
    }
}

fn tame(dat: &LevelZeroCuspidalDatum, unit: u64, num: u128, den: u128) -> TameCharacter {
    let coeff = dat.coeff();
    let u = CyclicCharacter::trivial(dat.q(), 1, coeff).unwrap();
    let u = CyclicCharacter::new(dat.q(), 1, coeff, unit as u128 % u.modulus()).unwrap();
    TameCharacter::new(u, RationalAngle::new(num % den, den).unwrap().reduce(coeff)).unwrap()
}

fn verdicts(c: &Classification) -> serde_json::Value {
    let mut v = serde_json::to_value(c).unwrap();
    v.as_object_mut().unwrap().remove("datum");
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn frobenius_representative_is_irrelevant(d in datum(), k in 0u64..4) {
        prop_assume!(d.is_some());
        let d = d.unwrap();
        let p = d.finite_param().param();
        let e = p.frobenius_orbit()[(k as usize) % p.orbit_size() as usize];
        let w = CuspidalRepFF::new(CyclicCharacter::new(d.q(), d.n(), d.coeff(), e).unwrap()).unwrap();
        let other = LevelZeroCuspidalDatum::new(*d.ext(), d.n(), d.coeff(), w, d.central_angle()).unwrap();
        prop_assert_eq!(&other, &d);
        prop_assert_eq!(verdicts(&classify(&other).unwrap()), verdicts(&classify(&d).unwrap()));
    }

    #[test]
    fn equal_angles_give_equal_data(d in datum(), k in 2u128..5) {
        prop_assume!(d.is_some());
        let d = d.unwrap();
        let a = d.central_angle();
        let spelled: RationalAngle = format!("{}/{}", a.num() * k, a.den() * k).parse().unwrap();
        prop_assert_eq!(spelled, a);
        let again = LevelZeroCuspidalDatum::new(*d.ext(), d.n(), d.coeff(), d.finite_param().clone(), spelled).unwrap();
        prop_assert_eq!(classify(&again).unwrap(), classify(&d).unwrap());
    }

    #[test]
    fn support_round_trip(d in datum()) {
        prop_assume!(d.is_some());
        let d = d.unwrap();
        let s = r_and_support(&d).unwrap();
        prop_assert_eq!(s.r * s.k, d.n());
        prop_assert!(s.ambiguity.contains(&s.rho.central_angle()));
        for a in &s.ambiguity {
            prop_assert_eq!(a.scale(s.r as u128), d.central_angle());
        }
        for m in s.members().unwrap() {
            prop_assert_eq!(r_and_support(&m).unwrap().r, 1);
            let inflated = m.finite_param().param().inflate(s.r).unwrap().canonical();
            prop_assert_eq!(&inflated, d.finite_param().param());
        }
    }

    #[test]
    fn twisting_is_equivariant(
        d in datum(),
        unit in any::<u64>(),
        num in 0u128..6,
        den in prop::sample::select(vec![1u128, 2, 3]),
    ) {
        prop_assume!(d.is_some());
        let d = d.unwrap();
        let chi = tame(&d, unit, num, den);
        let t = twist_by_tame(&d, &chi).unwrap();
        prop_assert_eq!(twist_by_tame(&t, &chi.inverse()).unwrap(), d.clone());
        prop_assert_eq!(r_and_support(&t).unwrap().r, r_and_support(&d).unwrap().r);
        let mu = chi.restrict_to_base(d.ext()).unwrap().inverse();
        prop_assert_eq!(
            mu_distinguished(&d, &mu).unwrap().verdict,
            is_distinguished_level0(&t).unwrap().verdict
        );
    }

    #[test]
    fn verdicts_are_stable(d in datum()) {
        prop_assume!(d.is_some());
        let d = d.unwrap();
        let first = classify(&d).unwrap();
        prop_assert_eq!(&classify(&d).unwrap(), &first);
        prop_assert_eq!(is_distinguished_level0(&d).unwrap(), first.distinguished.clone());
    }

    #[test]
    fn json_round_trips(d in datum()) {
        prop_assume!(d.is_some());
        let d = d.unwrap();
        let text = serde_json::to_string(&d).unwrap();
        prop_assert_eq!(&serde_json::from_str::<LevelZeroCuspidalDatum>(&text).unwrap(), &d);
        let c = classify(&d).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        let back: Classification = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn grid_spec_round_trips(q0 in prop::collection::vec(prop::sample::select(vec![3u64, 5, 7, 9]), 1..4), oracle in any::<bool>()) {
        let spec = GridSpec { q0, oracle, ..GridSpec::default() };
        let text = serde_json::to_string(&spec).unwrap();
        prop_assert_eq!(serde_json::from_str::<GridSpec>(&text).unwrap(), spec);
    }
}
