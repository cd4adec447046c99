//! Fixture data: the five-record entry script and a seeded synthetic
//! address book used as the preloaded case base.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::record::fields::*;
use crate::record::Record;

/// The five names entered twice per condition. Phone numbers are artificial.
pub fn script_records() -> Vec<Record> {
    vec![
        Record::from_pairs(
            "anderson",
            [
                (FIRST_NAME, "Robert"),
                (LAST_NAME, "Anderson"),
                (TITLE, "Account Marketing Rep"),
                (COMPANY, "IBM"),
                (ADDRESS1, "W 201 N River Drive"),
                (CITY, "Spokane"),
                (STATE, "WA"),
                (ZIP, "99201"),
                (PHONE1, "509 555 0000"),
                (PHONE2, "509 555 1111"),
            ],
        ),
        Record::from_pairs(
            "brice",
            [
                (FIRST_NAME, "Eric"),
                (LAST_NAME, "Brice"),
                (TITLE, "Director of Engineering"),
                (COMPANY, "RAIMA Corp"),
                (ADDRESS1, "3245 146th Place SE"),
                (CITY, "Bellevue"),
                (STATE, "WA"),
                (ZIP, "98007"),
                (PHONE1, "206 555 2222"),
                (PHONE2, "206 555 3333"),
                (PHONE3, "205 555 4444"),
            ],
        ),
        Record::from_pairs(
            "carlson",
            [
                (FIRST_NAME, "Mike"),
                (LAST_NAME, "Carlson"),
                (TITLE, "VP Engineering & Estimating"),
                (COMPANY, "General Construction"),
                (ADDRESS1, "2111 N Northgate Way"),
                (ADDRESS2, "Suite 305"),
                (CITY, "Seattle"),
                (STATE, "WA"),
                (ZIP, "98133"),
                (PHONE1, "206 555 5555"),
                (PHONE2, "206 555 6666"),
            ],
        ),
        Record::from_pairs(
            "friedman",
            [
                (FIRST_NAME, "Peter"),
                (LAST_NAME, "Friedman"),
                (TITLE, "President"),
                (COMPANY, "NOVA Information Systems"),
                (ADDRESS1, "12277 134th Court NE"),
                (ADDRESS2, "Suite 203"),
                (CITY, "Redmond"),
                (STATE, "WA"),
                (ZIP, "98052"),
                (PHONE1, "206 555 7777"),
            ],
        ),
        Record::from_pairs(
            "leland",
            [
                (FIRST_NAME, "Thomas"),
                (LAST_NAME, "Leland"),
                (TITLE, "Staffing Manager"),
                (COMPANY, "Aldus Corporation"),
                (ADDRESS1, "411 First Ave South"),
                (CITY, "Seattle"),
                (STATE, "WA"),
                (ZIP, "98104 2871"),
                (PHONE1, "206 555 8888"),
                (PHONE2, "206 555 9999"),
            ],
        ),
    ]
}

struct Office {
    street: &'static str,
    suite: Option<&'static str>,
    city: &'static str,
    state: &'static str,
    zip: &'static str,
    exchange: &'static str,
}

struct Company {
    name: &'static str,
    domain: &'static str,
    weight: u32,
    offices: &'static [Office],
}

macro_rules! office {
    ($street:expr, $suite:expr, $city:expr, $state:expr, $zip:expr, $exchange:expr) => {
        Office { street: $street, suite: $suite, city: $city, state: $state, zip: $zip, exchange: $exchange }
    };
}

// Popularity weights are heavy-tailed: the top company holds a bit over a
// tenth of employed records and the top twenty about half.
const COMPANIES: &[Company] = &[
    Company {
        name: "Cascade Aero",
        domain: "cascadeaero.example",
        weight: 40,
        offices: &[
            office!("7755 E Marginal Way S", None, "Seattle", "WA", "98108", "206 655"),
            office!("3003 W Casino Road", None, "Everett", "WA", "98204", "206 342"),
        ],
    },
    Company {
        name: "Inland Power",
        domain: "inlandpower.example",
        weight: 22,
        offices: &[office!("1411 E Mission Ave", None, "Spokane", "WA", "99202", "509 489")],
    },
    Company {
        name: "Palouse Grain Growers",
        domain: "palousegrain.example",
        weight: 16,
        offices: &[office!("120 S Main Street", None, "Colfax", "WA", "99111", "509 397")],
    },
    Company {
        name: "Evergreen Savings Bank",
        domain: "evergreensavings.example",
        weight: 14,
        offices: &[
            office!("1000 Second Avenue", Some("Floor 12"), "Seattle", "WA", "98104", "206 464"),
            office!("601 W Riverside Ave", None, "Spokane", "WA", "99201", "509 353"),
        ],
    },
    Company {
        name: "Olympic Software",
        domain: "olympicsw.example",
        weight: 12,
        offices: &[office!("15395 NE 40th Street", Some("Suite 200"), "Redmond", "WA", "98052", "206 882")],
    },
    Company {
        name: "Rainier Medical Center",
        domain: "rainiermed.example",
        weight: 10,
        offices: &[office!("1200 Jefferson Street", None, "Seattle", "WA", "98104", "206 223")],
    },
    Company {
        name: "Pullman Regional Clinic",
        domain: "pullmanclinic.example",
        weight: 9,
        offices: &[office!("835 SE Bishop Blvd", None, "Pullman", "WA", "99163", "509 332")],
    },
    Company {
        name: "Columbia Basin Farms",
        domain: "cbfarms.example",
        weight: 8,
        offices: &[office!("5803 W Clearwater Ave", None, "Kennewick", "WA", "99336", "509 783")],
    },
    Company {
        name: "Puget Timber",
        domain: "pugettimber.example",
        weight: 8,
        offices: &[office!("33663 Weyerhaeuser Way S", None, "Tacoma", "WA", "98401", "206 924")],
    },
    Company {
        name: "Yakima Fruit Packers",
        domain: "yakimafruit.example",
        weight: 7,
        offices: &[office!("2 N First Street", None, "Yakima", "WA", "98901", "509 453")],
    },
    Company {
        name: "Northwest Mutual Insurance",
        domain: "nwmutual.example",
        weight: 7,
        offices: &[office!("10900 NE Fourth Street", Some("Suite 1500"), "Bellevue", "WA", "98004", "206 451")],
    },
    Company {
        name: "Whitman County Bank",
        domain: "whitmanbank.example",
        weight: 6,
        offices: &[office!("302 N Grand Ave", None, "Pullman", "WA", "99163", "509 334")],
    },
    Company {
        name: "Kitsap Marine",
        domain: "kitsapmarine.example",
        weight: 6,
        offices: &[office!("1102 Park Ave", None, "Bremerton", "WA", "98337", "360 377")],
    },
    Company {
        name: "Snohomish Builders",
        domain: "snobuilders.example",
        weight: 5,
        offices: &[office!("2930 Wetmore Ave", None, "Everett", "WA", "98201", "206 259")],
    },
    Company {
        name: "Wenatchee Orchards",
        domain: "wenorchards.example",
        weight: 5,
        offices: &[office!("100 Orondo Ave", None, "Wenatchee", "WA", "98801", "509 662")],
    },
    Company {
        name: "Bellingham Printing",
        domain: "bhamprint.example",
        weight: 4,
        offices: &[office!("1306 Commercial Street", None, "Bellingham", "WA", "98225", "360 676")],
    },
    Company {
        name: "Tacoma Steel",
        domain: "tacomasteel.example",
        weight: 4,
        offices: &[office!("3201 Ruston Way", None, "Tacoma", "WA", "98402", "206 272")],
    },
    Company {
        name: "Olympia Legal Group",
        domain: "olylegal.example",
        weight: 4,
        offices: &[office!("111 Market Street NE", Some("Suite 300"), "Olympia", "WA", "98501", "206 943")],
    },
    Company {
        name: "Walla Walla Vintners",
        domain: "wwvintners.example",
        weight: 3,
        offices: &[office!("1111 Abadie Street", None, "Walla Walla", "WA", "99362", "509 525")],
    },
    Company {
        name: "Moscow Seed Company",
        domain: "moscowseed.example",
        weight: 3,
        offices: &[office!("511 S Main Street", None, "Moscow", "ID", "83843", "208 882")],
    },
    Company {
        name: "Kirkland Design Associates",
        domain: "kirklanddesign.example",
        weight: 3,
        offices: &[office!("12 Lake Street", None, "Kirkland", "WA", "98033", "206 822")],
    },
    Company {
        name: "Renton Auto Center",
        domain: "rentonauto.example",
        weight: 3,
        offices: &[office!("200 SW Grady Way", None, "Renton", "WA", "98055", "206 226")],
    },
    Company {
        name: "Lewis Clark Hardware",
        domain: "lchardware.example",
        weight: 2,
        offices: &[office!("825 Sixth Street", None, "Clarkston", "WA", "99403", "509 758")],
    },
    Company {
        name: "Skagit Valley Dairy",
        domain: "skagitdairy.example",
        weight: 2,
        offices: &[office!("1500 Riverside Drive", None, "Mount Vernon", "WA", "98273", "360 336")],
    },
    Company {
        name: "Issaquah Outfitters",
        domain: "issaquahout.example",
        weight: 2,
        offices: &[office!("775 NW Gilman Blvd", None, "Issaquah", "WA", "98027", "206 392")],
    },
    Company {
        name: "Portland Paper Company",
        domain: "pdxpaper.example",
        weight: 2,
        offices: &[office!("1800 SW First Ave", None, "Portland", "OR", "97201", "503 228")],
    },
    Company {
        name: "Spokane Valley Schools",
        domain: "svschools.example",
        weight: 2,
        offices: &[office!("2510 N Pines Road", None, "Spokane", "WA", "99206", "509 924")],
    },
    Company {
        name: "Boise Summit Partners",
        domain: "boisesummit.example",
        weight: 1,
        offices: &[office!("950 W Bannock Street", Some("Suite 1100"), "Boise", "ID", "83702", "208 345")],
    },
    Company {
        name: "Ellensburg Feed Trust",
        domain: "efeed.example",
        weight: 1,
        offices: &[office!("400 N Main Street", None, "Ellensburg", "WA", "98926", "509 925")],
    },
    Company {
        name: "Cheney Pioneer Foods",
        domain: "cheneyfoods.example",
        weight: 1,
        offices: &[office!("1824 First Street", None, "Cheney", "WA", "99004", "509 235")],
    },
];

const FIRST_NAMES: &[&str] = &[
    "John", "James", "Robert", "Michael", "William", "David", "Richard", "Mary", "Patricia", "Linda", "Barbara",
    "Susan", "Thomas", "Charles", "Daniel", "Paul", "Mark", "Donald", "George", "Kenneth", "Steven", "Nancy",
    "Karen", "Helen", "Sandra", "Carol", "Sharon", "Laura", "Edward", "Brian", "Ronald", "Kevin", "Gary",
    "Larry", "Scott", "Frank", "Ruth", "Donna", "Michelle", "Deborah", "Amy", "Anna", "Rebecca", "Kathleen",
    "Martha", "Janet", "Catherine", "Diane", "Alice", "Julie", "Gregory", "Dennis", "Walter", "Patrick", "Harold",
    "Douglas", "Henry", "Carl", "Arthur", "Roger", "Gerald", "Keith", "Bruce", "Howard", "Eugene", "Russell",
    "Craig", "Alan", "Joyce", "Jean", "Judith", "Janice", "Beverly", "Lois", "Norma", "Paula", "Peggy", "Ellen",
    "Marjorie", "Sylvia", "Vivian",
];

const LAST_NAMES: &[&str] = &[
    "Smith", "Johnson", "Williams", "Jones", "Brown", "Davis", "Miller", "Wilson", "Moore", "Taylor", "Jackson",
    "White", "Harris", "Thompson", "Martinez", "Clark", "Lewis", "Walker", "Hall", "Allen", "Young", "King",
    "Wright", "Hill", "Green", "Adams", "Baker", "Nelson", "Carter", "Mitchell", "Roberts", "Turner", "Campbell",
    "Parker", "Evans", "Collins", "Stewart", "Morris", "Reed", "Cook", "Bell", "Murphy", "Cooper", "Peterson",
    "Watson", "Brooks", "Price", "Bennett", "Barnes", "Henderson", "Jenkins", "Powell", "Hughes", "Butler",
    "Foster", "Hamilton", "Graham", "Sullivan", "Wallace", "Olson", "Larson", "Hansen", "Johansen", "Nielsen",
    "Swanson", "Lindquist", "Schwarzkopf", "Okamoto", "Vuong", "Kowalczyk", "Haugen", "Tveit",
];

// "President" repeats; the rest is flat.
const TITLES: &[(&str, u32)] = &[
    ("President", 12),
    ("Vice President", 3),
    ("Sales Manager", 2),
    ("Office Manager", 2),
    ("Software Engineer", 2),
    ("Director of Marketing", 1),
    ("Chief Financial Officer", 1),
    ("Senior Accountant", 1),
    ("Plant Manager", 1),
    ("Regional Sales Representative", 1),
    ("Human Resources Director", 1),
    ("Project Engineer", 1),
    ("Customer Service Supervisor", 1),
    ("Research Scientist", 1),
    ("Attorney", 1),
    ("Owner", 1),
    ("Physician", 1),
    ("Executive Assistant", 1),
    ("General Manager", 1),
    ("Data Analyst", 1),
];

struct Home {
    city: &'static str,
    state: &'static str,
    zip: &'static str,
    area: &'static str,
    weight: u32,
}

const HOMES: &[Home] = &[
    Home { city: "Pullman", state: "WA", zip: "99163", area: "509", weight: 14 },
    Home { city: "Spokane", state: "WA", zip: "99203", area: "509", weight: 12 },
    Home { city: "Seattle", state: "WA", zip: "98115", area: "206", weight: 10 },
    Home { city: "Bellevue", state: "WA", zip: "98006", area: "206", weight: 5 },
    Home { city: "Tacoma", state: "WA", zip: "98406", area: "206", weight: 4 },
    Home { city: "Moscow", state: "ID", zip: "83843", area: "208", weight: 4 },
    Home { city: "Olympia", state: "WA", zip: "98502", area: "206", weight: 3 },
    Home { city: "Yakima", state: "WA", zip: "98902", area: "509", weight: 3 },
    Home { city: "Richland", state: "WA", zip: "99352", area: "509", weight: 3 },
    Home { city: "Vancouver", state: "WA", zip: "98661", area: "206", weight: 2 },
    Home { city: "Portland", state: "OR", zip: "97219", area: "503", weight: 2 },
    Home { city: "Redmond", state: "WA", zip: "98052", area: "206", weight: 2 },
    Home { city: "Kirkland", state: "WA", zip: "98034", area: "206", weight: 2 },
    Home { city: "Walla Walla", state: "WA", zip: "99362", area: "509", weight: 2 },
    Home { city: "Boise", state: "ID", zip: "83706", area: "208", weight: 1 },
    Home { city: "Wenatchee", state: "WA", zip: "98801", area: "509", weight: 1 },
];

const STREETS: &[&str] = &[
    "Oak Street", "Maple Ave", "Cedar Lane", "Pine Street", "Grand Ave", "Division Street", "Monroe Street",
    "Lincoln Way", "Park Drive", "Hill Road", "Lake Street", "Ridge View Drive", "Church Street", "Elm Court",
    "Spruce Place", "Market Street",
];

fn weighted<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T], weight: impl Fn(&T) -> u32) -> &'a T {
    let total: u32 = items.iter().map(&weight).sum();
    let mut pick = rng.random_range(0..total);
    for item in items {
        let w = weight(item);
        if pick < w {
            return item;
        }
        pick -= w;
    }
    unreachable!("weights sum to total")
}

fn extension(rng: &mut ChaCha8Rng) -> String {
    format!("{:04}", rng.random_range(0..10_000))
}

/// A deterministic address book of `n` records shaped like an alumni contact
/// list: most records carry a full mailing address and one to three phone
/// numbers; few carry an honorific, country or e-mail address. None of the
/// companies in [`script_records`] appear.
pub fn synthetic_address_book(n: usize, seed: u64) -> Vec<Record> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let first = *FIRST_NAMES.choose(&mut rng).expect("non-empty");
        let last = *LAST_NAMES.choose(&mut rng).expect("non-empty");
        let mut pairs: Vec<(&str, String)> = vec![(FIRST_NAME, first.into()), (LAST_NAME, last.into())];

        if rng.random_bool(0.08) {
            let h = *crate::record::HONORIFICS.choose(&mut rng).expect("non-empty");
            pairs.push((HONORIFIC, h.into()));
        }

        let home_area;
        if rng.random_bool(0.7) {
            let company = weighted(&mut rng, COMPANIES, |c| c.weight);
            let office = company.offices.choose(&mut rng).expect("offices");
            let title = weighted(&mut rng, TITLES, |t| t.1).0;
            pairs.push((TITLE, title.into()));
            pairs.push((COMPANY, company.name.into()));
            pairs.push((ADDRESS1, office.street.into()));
            if let Some(suite) = office.suite {
                pairs.push((ADDRESS2, suite.into()));
            }
            pairs.push((CITY, office.city.into()));
            pairs.push((STATE, office.state.into()));
            pairs.push((ZIP, office.zip.into()));
            pairs.push((PHONE1, format!("{} {}", office.exchange, extension(&mut rng))));
            if rng.random_bool(0.1) {
                let user = format!("{}{}", &first[..1], last).to_lowercase();
                pairs.push((EMAIL, format!("{user}@{}", company.domain)));
            }
            home_area = office.exchange.split(' ').next().expect("area code").to_owned();
            if rng.random_bool(0.5) {
                let exchange = rng.random_range(200..1000);
                pairs.push((PHONE2, format!("{home_area} {exchange} {}", extension(&mut rng))));
            }
        } else {
            let home = weighted(&mut rng, HOMES, |h| h.weight);
            let street = STREETS.choose(&mut rng).expect("streets");
            pairs.push((ADDRESS1, format!("{} {street}", rng.random_range(100..20_000))));
            pairs.push((CITY, home.city.into()));
            pairs.push((STATE, home.state.into()));
            pairs.push((ZIP, home.zip.into()));
            home_area = home.area.to_owned();
            let exchange = rng.random_range(200..1000);
            pairs.push((PHONE1, format!("{home_area} {exchange} {}", extension(&mut rng))));
        }
        if rng.random_bool(0.15) {
            let exchange = rng.random_range(200..1000);
            pairs.push((PHONE3, format!("{home_area} {exchange} {}", extension(&mut rng))));
        }
        if rng.random_bool(0.05) {
            pairs.push((COUNTRY, "United States".into()));
        }
        out.push(Record::from_pairs(format!("p{:03}", i + 1), pairs));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::record::{default_schema, word_count};

    #[test]
    fn script_has_twenty_point_eight_words_per_name() {
        let records = script_records();
        let schema = default_schema();
        let words: usize = records
            .iter()
            .flat_map(|r| schema.fields().iter().map(move |f| word_count(r.raw(f.id.as_str()))))
            .sum();
        assert_eq!(records.len(), 5);
        assert_eq!(words, 104);
        for r in &records {
            schema.check_record(r).unwrap();
        }
    }

    #[test]
    fn synthetic_book_is_deterministic_and_disjoint_from_script() {
        let a = synthetic_address_book(200, 7);
        let b = synthetic_address_book(200, 7);
        assert_eq!(a, b);
        assert_ne!(a, synthetic_address_book(200, 8));
        let script_companies: Vec<_> = script_records().iter().map(|r| r.raw(COMPANY).to_owned()).collect();
        assert!(a.iter().all(|r| !script_companies.contains(&r.raw(COMPANY).to_owned())));
        let schema = default_schema();
        assert!(a.iter().all(|r| schema.check_record(r).is_ok()));
    }
}
