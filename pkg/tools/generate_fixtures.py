#!/usr/bin/env python3
"""Build the bundled raw CSV dataset and its expected formatted outputs.

Run from the repository root:

    python3 tools/generate_fixtures.py

Writes tests/data/fixtures/time_series_covid19_{confirmed,deaths}_global.csv
in the raw JHU layout (header Province/State,Country/Region,Lat,Long then one
m/d/yy column per day from 1/22/20 through 3/31/20), and the four expected
output files under tests/data/golden/.

The dataset is deterministic: a fixed seed drives every generated series, so
rerunning this script reproduces the committed files byte for byte.  Values
are synthetic but shaped like the real feed: cumulative counts that start at
zero, grow roughly exponentially from each row's first case, and never
decrease (with one deliberate exception, Saint Lucia, which carries a
mid-series correction back to zero to exercise sparse handling).

The golden files are produced here by a self-contained transform written
independently of the package: a hand-rolled quote-aware field splitter and
per-line string edits.  The test suite compares the package's formatter
against these files byte for byte, so the two implementations check each
other.
"""

from __future__ import annotations

import random
from datetime import date, datetime, timedelta
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIXTURE_DIR = ROOT / "tests" / "data" / "fixtures"
GOLDEN_DIR = ROOT / "tests" / "data" / "golden"

START = date(2020, 1, 22)
END = date(2020, 3, 31)
N_DAYS = (END - START).days + 1  # 70

SEED = 20200331

# (province, country, lat, long); one row per location, no zero coordinates.
LOCATIONS: list[tuple[str, str, str, str]] = [
    ("", "Afghanistan", "33.0", "65.0"),
    ("", "Albania", "41.1533", "20.1683"),
    ("", "Algeria", "28.0339", "1.6596"),
    ("", "Andorra", "42.5063", "1.5218"),
    ("", "Angola", "-11.2027", "17.8739"),
    ("", "Antigua and Barbuda", "17.0608", "-61.7964"),
    ("", "Argentina", "-38.4161", "-63.6167"),
    ("", "Armenia", "40.0691", "45.0382"),
    ("Australian Capital Territory", "Australia", "-35.4735", "149.0124"),
    ("New South Wales", "Australia", "-33.8688", "151.2093"),
    ("Northern Territory", "Australia", "-12.4634", "130.8456"),
    ("Queensland", "Australia", "-27.4698", "153.0251"),
    ("South Australia", "Australia", "-34.9285", "138.6007"),
    ("Tasmania", "Australia", "-42.8821", "147.3272"),
    ("Victoria", "Australia", "-37.8136", "144.9631"),
    ("Western Australia", "Australia", "-31.9505", "115.8605"),
    ("", "Austria", "47.5162", "14.5501"),
    ("", "Azerbaijan", "40.1431", "47.5769"),
    ("", "Bahamas", "25.0343", "-77.3963"),
    ("", "Bahrain", "26.0275", "50.55"),
    ("", "Bangladesh", "23.685", "90.3563"),
    ("", "Barbados", "13.1939", "-59.5432"),
    ("", "Belarus", "53.7098", "27.9534"),
    ("", "Belgium", "50.8333", "4.469936"),
    ("", "Belize", "17.1899", "-88.4976"),
    ("", "Benin", "9.3077", "2.3158"),
    ("", "Bhutan", "27.5142", "90.4336"),
    ("", "Bolivia", "-16.2902", "-63.5887"),
    ("", "Bosnia and Herzegovina", "43.9159", "17.6791"),
    ("", "Brazil", "-14.235", "-51.9253"),
    ("", "Brunei", "4.5353", "114.7277"),
    ("", "Bulgaria", "42.7339", "25.4858"),
    ("", "Burkina Faso", "12.2383", "-1.5616"),
    ("", "Burma", "21.9162", "95.956"),
    ("", "Cabo Verde", "16.5388", "-23.0418"),
    ("", "Cambodia", "11.55", "104.9167"),
    ("", "Cameroon", "3.848", "11.5021"),
    ("Alberta", "Canada", "53.9333", "-116.5765"),
    ("British Columbia", "Canada", "53.7267", "-127.6476"),
    ("Manitoba", "Canada", "53.7609", "-98.8139"),
    ("New Brunswick", "Canada", "46.5653", "-66.4619"),
    ("Newfoundland and Labrador", "Canada", "53.1355", "-57.6604"),
    ("Nova Scotia", "Canada", "44.682", "-63.7443"),
    ("Ontario", "Canada", "51.2538", "-85.3232"),
    ("Prince Edward Island", "Canada", "46.5107", "-63.4168"),
    ("Quebec", "Canada", "52.9399", "-73.5491"),
    ("Saskatchewan", "Canada", "52.9399", "-106.4509"),
    ("", "Central African Republic", "6.6111", "20.9394"),
    ("", "Chad", "15.4542", "18.7322"),
    ("", "Chile", "-35.6751", "-71.543"),
    ("Anhui", "China", "31.8257", "117.2264"),
    ("Beijing", "China", "40.1824", "116.4142"),
    ("Chongqing", "China", "30.0572", "107.874"),
    ("Fujian", "China", "26.0789", "117.9874"),
    ("Guangdong", "China", "23.3417", "113.4244"),
    ("Guangxi", "China", "23.8298", "108.7881"),
    ("Hong Kong", "China", "22.3", "114.2"),
    ("Hubei", "China", "30.9756", "112.2707"),
    ("Hunan", "China", "27.6104", "111.7088"),
    ("Macau", "China", "22.1667", "113.55"),
    ("Shandong", "China", "36.3427", "118.1498"),
    ("Shanghai", "China", "31.202", "121.4491"),
    ("Sichuan", "China", "30.6171", "102.7103"),
    ("Tianjin", "China", "39.3054", "117.323"),
    ("Yunnan", "China", "24.974", "101.487"),
    ("Zhejiang", "China", "29.1832", "120.0934"),
    ("", "Colombia", "4.5709", "-74.2973"),
    ("", "Congo (Brazzaville)", "-0.228", "15.8277"),
    ("", "Congo (Kinshasa)", "-4.0383", "21.7587"),
    ("", "Costa Rica", "9.7489", "-83.7534"),
    ("", "Cote d'Ivoire", "7.54", "-5.5471"),
    ("", "Croatia", "45.1", "15.2"),
    ("", "Cuba", "21.5218", "-77.7812"),
    ("", "Cyprus", "35.1264", "33.4299"),
    ("", "Czechia", "49.8175", "15.473"),
    ("", "Denmark", "56.2639", "9.5018"),
    ("Faroe Islands", "Denmark", "61.8926", "-6.9118"),
    ("Greenland", "Denmark", "71.7069", "-42.6043"),
    ("", "Djibouti", "11.8251", "42.5903"),
    ("", "Dominica", "15.415", "-61.371"),
    ("", "Dominican Republic", "18.7357", "-70.1627"),
    ("", "Ecuador", "-1.8312", "-78.1834"),
    ("", "Egypt", "26.0", "30.0"),
    ("", "El Salvador", "13.7942", "-88.8965"),
    ("", "Equatorial Guinea", "1.6508", "10.2679"),
    ("", "Eritrea", "15.1794", "39.7823"),
    ("", "Estonia", "58.5953", "25.0136"),
    ("", "Eswatini", "-26.5225", "31.4659"),
    ("", "Ethiopia", "9.145", "40.4897"),
    ("", "Fiji", "-17.7134", "178.065"),
    ("", "Finland", "61.9241", "25.7482"),
    ("", "France", "46.2276", "2.2137"),
    ("", "Gabon", "-0.8037", "11.6094"),
    ("", "Gambia", "13.4432", "-15.3101"),
    ("", "Georgia", "42.3154", "43.3569"),
    ("", "Germany", "51.1657", "10.4515"),
    ("", "Ghana", "7.9465", "-1.0232"),
    ("", "Greece", "39.0742", "21.8243"),
    ("", "Grenada", "12.1165", "-61.679"),
    ("", "Guatemala", "15.7835", "-90.2308"),
    ("", "Guinea", "9.9456", "-9.6966"),
    ("", "Guinea-Bissau", "11.8037", "-15.1804"),
    ("", "Guyana", "4.8604", "-58.9302"),
    ("", "Haiti", "18.9712", "-72.2852"),
    ("", "Honduras", "15.2", "-86.2419"),
    ("", "Hungary", "47.1625", "19.5033"),
    ("", "Iceland", "64.9631", "-19.0208"),
    ("", "India", "20.5937", "78.9629"),
    ("", "Indonesia", "-0.7893", "113.9213"),
    ("", "Iran", "32.4279", "53.688"),
    ("", "Iraq", "33.2232", "43.6793"),
    ("", "Ireland", "53.1424", "-7.6921"),
    ("", "Israel", "31.0461", "34.8516"),
    ("", "Italy", "41.8719", "12.5674"),
    ("", "Jamaica", "18.1096", "-77.2975"),
    ("", "Japan", "36.2048", "138.2529"),
    ("", "Jordan", "30.5852", "36.2384"),
    ("", "Kazakhstan", "48.0196", "66.9237"),
    ("", "Kenya", "-0.0236", "37.9062"),
    ("", "Korea, South", "35.9078", "127.7669"),
    ("", "Kosovo", "42.6026", "20.903"),
    ("", "Kuwait", "29.3117", "47.4818"),
    ("", "Kyrgyzstan", "41.2044", "74.7661"),
    ("", "Laos", "19.8563", "102.4955"),
    ("", "Latvia", "56.8796", "24.6032"),
    ("", "Lebanon", "33.8547", "35.8623"),
    ("", "Liberia", "6.4281", "-9.4295"),
    ("", "Libya", "26.3351", "17.2283"),
    ("", "Liechtenstein", "47.166", "9.5554"),
    ("", "Lithuania", "55.1694", "23.8813"),
    ("", "Luxembourg", "49.8153", "6.1296"),
    ("", "Madagascar", "-18.7669", "46.8691"),
    ("", "Malaysia", "4.2105", "101.9758"),
    ("", "Maldives", "3.2028", "73.2207"),
    ("", "Mali", "17.5707", "-3.9962"),
    ("", "Malta", "35.9375", "14.3754"),
    ("", "Mauritania", "21.0079", "-10.9408"),
    ("", "Mauritius", "-20.3484", "57.5522"),
    ("", "Mexico", "23.6345", "-102.5528"),
    ("", "Moldova", "47.4116", "28.3699"),
    ("", "Monaco", "43.7384", "7.4246"),
    ("", "Mongolia", "46.8625", "103.8467"),
    ("", "Montenegro", "42.7087", "19.3744"),
    ("", "Morocco", "31.7917", "-7.0926"),
    ("", "Mozambique", "-18.665695", "35.529562"),
    ("", "Namibia", "-22.9576", "18.4904"),
    ("", "Nepal", "28.3949", "84.124"),
    ("", "Netherlands", "52.1326", "5.2913"),
    ("Aruba", "Netherlands", "12.5211", "-69.9683"),
    ("Bonaire, Sint Eustatius and Saba", "Netherlands", "12.1784", "-68.2385"),
    ("Curacao", "Netherlands", "12.1696", "-68.99"),
    ("", "New Zealand", "-40.9006", "174.886"),
    ("", "Nicaragua", "12.8654", "-85.2072"),
    ("", "Niger", "17.6078", "8.0817"),
    ("", "Nigeria", "9.082", "8.6753"),
    ("", "North Macedonia", "41.6086", "21.7453"),
    ("", "Norway", "60.472", "8.4689"),
    ("", "Oman", "21.4735", "55.9754"),
    ("", "Pakistan", "30.3753", "69.3451"),
    ("", "Panama", "8.538", "-80.7821"),
    ("", "Papua New Guinea", "-6.314993", "143.95555"),
    ("", "Paraguay", "-23.4425", "-58.4438"),
    ("", "Peru", "-9.19", "-75.0152"),
    ("", "Philippines", "12.8797", "121.774"),
    ("", "Poland", "51.9194", "19.1451"),
    ("", "Portugal", "39.3999", "-8.2245"),
    ("", "Qatar", "25.3548", "51.1839"),
    ("", "Romania", "45.9432", "24.9668"),
    ("", "Russia", "61.524", "105.3188"),
    ("", "Rwanda", "-1.9403", "29.8739"),
    ("", "Saint Kitts and Nevis", "17.357822", "-62.782998"),
    ("", "Saint Lucia", "13.9094", "-60.9789"),
    ("", "Saint Vincent and the Grenadines", "12.9843", "-61.2872"),
    ("", "San Marino", "43.9424", "12.4578"),
    ("", "Saudi Arabia", "23.8859", "45.0792"),
    ("", "Senegal", "14.4974", "-14.4524"),
    ("", "Serbia", "44.0165", "21.0059"),
    ("", "Seychelles", "-4.6796", "55.492"),
    ("", "Sierra Leone", "8.460555", "-11.779889"),
    ("", "Singapore", "1.3521", "103.8198"),
    ("", "Slovakia", "48.669", "19.699"),
    ("", "Slovenia", "46.1512", "14.9955"),
    ("", "Somalia", "5.1521", "46.1996"),
    ("", "South Africa", "-30.5595", "22.9375"),
    ("", "Spain", "40.4637", "-3.7492"),
    ("", "Sri Lanka", "7.8731", "80.7718"),
    ("", "Sudan", "12.8628", "30.2176"),
    ("", "Suriname", "3.9193", "-56.0278"),
    ("", "Sweden", "60.1282", "18.6435"),
    ("", "Switzerland", "46.8182", "8.2275"),
    ("", "Syria", "34.8021", "38.9968"),
    ("", "Taiwan*", "23.7", "121.0"),
    ("", "Tanzania", "-6.369", "34.8888"),
    ("", "Thailand", "15.870032", "100.992541"),
    ("", "Togo", "8.6195", "0.8248"),
    ("", "Trinidad and Tobago", "10.6918", "-61.2225"),
    ("", "Tunisia", "33.8869", "9.5375"),
    ("", "Turkey", "38.9637", "35.2433"),
    ("", "US", "37.0902", "-95.7129"),
    ("", "Uganda", "1.3733", "32.2903"),
    ("", "Ukraine", "48.3794", "31.1656"),
    ("", "United Arab Emirates", "23.4241", "53.8478"),
    ("", "United Kingdom", "55.3781", "-3.436"),
    ("Bermuda", "United Kingdom", "32.3078", "-64.7505"),
    ("Cayman Islands", "United Kingdom", "19.3133", "-81.2546"),
    ("Channel Islands", "United Kingdom", "49.3723", "-2.3644"),
    ("Gibraltar", "United Kingdom", "36.1408", "-5.3536"),
    ("Isle of Man", "United Kingdom", "54.2361", "-4.5481"),
    ("Montserrat", "United Kingdom", "16.742498", "-62.187366"),
    ("", "Uruguay", "-32.5228", "-55.7658"),
    ("", "Uzbekistan", "41.3775", "64.5853"),
    ("", "Venezuela", "6.4238", "-66.5897"),
    ("", "Vietnam", "14.058324", "108.277199"),
    ("", "Zambia", "-13.1339", "27.8493"),
    ("", "Zimbabwe", "-19.0154", "29.1549"),
]

# Anchored rows: (first case day, first value, final confirmed,
#                 first death day or None, final deaths).
# Day indexes count from 1/22/20 = 0.
PINNED: dict[tuple[str, str], tuple[int, int, int, int | None, int]] = {
    ("Hubei", "China"): (0, 444, 67801, 0, 3187),
    ("", "Thailand"): (0, 2, 1651, 40, 10),
    ("", "Japan"): (0, 2, 1953, 24, 56),
    ("", "Korea, South"): (0, 1, 9786, 29, 162),
    ("", "Taiwan*"): (0, 1, 322, 25, 5),
    ("", "US"): (0, 1, 188172, 38, 3873),
    ("", "Singapore"): (1, 1, 926, 59, 3),
    ("", "France"): (2, 2, 52128, 24, 3523),
    ("", "Germany"): (5, 1, 71808, 48, 775),
    ("", "Italy"): (9, 2, 105792, 30, 12428),
    ("", "United Kingdom"): (9, 2, 25150, 44, 1789),
    ("", "Spain"): (10, 1, 95923, 42, 8464),
    ("", "Iran"): (28, 2, 44605, 28, 2898),
    ("", "Morocco"): (40, 1, 617, 48, 36),
    ("British Columbia", "Canada"): (6, 1, 1013, 47, 24),
    ("Ontario", "Canada"): (4, 1, 1966, 49, 33),
}


def cumulative_series(rng: random.Random, first: int, start: int, final: int) -> list[int]:
    """A non-decreasing 70-day cumulative count ending exactly at final."""
    vals = [0] * N_DAYS
    if final <= 0:
        return vals
    last = N_DAYS - 1
    span = last - first
    if span <= 0:
        vals[last] = final
        return vals
    base = max(start, 1)
    for i in range(first, N_DAYS):
        t = (i - first) / span
        ideal = base * (final / base) ** t
        vals[i] = int(round(ideal * rng.uniform(0.85, 1.15)))
    vals[first] = start
    vals[last] = final
    for i in range(first + 1, N_DAYS):
        vals[i] = min(final, max(vals[i], vals[i - 1]))
    return vals


def build_dataset() -> tuple[list[list[int]], list[list[int]]]:
    rng = random.Random(SEED)
    confirmed: list[list[int]] = []
    deaths: list[list[int]] = []
    for province, country, _lat, _long in LOCATIONS:
        pin = PINNED.get((province, country))
        if pin:
            first_c, start_c, final_c, first_d, final_d = pin
        else:
            first_c = int(rng.triangular(20, 66, 52))
            final_c = max(1, int(round(10 ** rng.uniform(0.3, 3.4))))
            start_c = 1
            if rng.random() < 0.45 and final_c >= 10:
                first_d = min(N_DAYS - 1, first_c + rng.randint(4, 14))
                final_d = max(1, int(round(final_c * rng.uniform(0.005, 0.08))))
            else:
                first_d, final_d = None, 0
        c_series = cumulative_series(rng, first_c, start_c, final_c)
        if first_d is None or final_d <= 0:
            d_series = [0] * N_DAYS
        else:
            d_series = cumulative_series(rng, first_d, 1, final_d)
            d_series = [min(d, c) for d, c in zip(d_series, c_series)]
        confirmed.append(c_series)
        deaths.append(d_series)

    # One data correction: Saint Lucia drops back to zero for a day.
    idx = next(
        i for i, loc in enumerate(LOCATIONS) if loc[1] == "Saint Lucia" and loc[0] == ""
    )
    series = confirmed[idx]
    first = next(i for i, v in enumerate(series) if v > 0)
    if first + 2 < N_DAYS - 1:
        series[first + 2] = 0
    return confirmed, deaths


def csv_field(value: str) -> str:
    return f'"{value}"' if "," in value else value


def raw_csv_text(series: list[list[int]]) -> str:
    header = ["Province/State", "Country/Region", "Lat", "Long"]
    d = START
    while d <= END:
        header.append(f"{d.month}/{d.day}/{d.year % 100}")
        d += timedelta(days=1)
    lines = [",".join(header)]
    order = sorted(range(len(LOCATIONS)), key=lambda i: (LOCATIONS[i][1], LOCATIONS[i][0]))
    for i in order:
        province, country, lat, long_ = LOCATIONS[i]
        fields = [csv_field(province), csv_field(country), lat, long_]
        fields.extend(str(v) for v in series[i])
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------- expected output
# Everything below reimplements the formatting rules from scratch on raw
# text so the golden files do not depend on the package under test.


def split_quoted(line: str) -> list[str]:
    fields: list[str] = []
    buf: list[str] = []
    in_quotes = False
    i = 0
    while i < len(line):
        ch = line[i]
        if in_quotes:
            if ch == '"':
                if i + 1 < len(line) and line[i + 1] == '"':
                    buf.append('"')
                    i += 2
                    continue
                in_quotes = False
                i += 1
                continue
            buf.append(ch)
            i += 1
            continue
        if ch == '"':
            in_quotes = True
            i += 1
            continue
        if ch == ",":
            fields.append("".join(buf))
            buf = []
            i += 1
            continue
        buf.append(ch)
        i += 1
    fields.append("".join(buf))
    return fields


def clean_field(field: str) -> str:
    field = field.replace('"', "").replace("*", "")
    field = field.replace(", ", "-")
    return field.replace(",", "-")


def expected_formatted(raw_text: str) -> str:
    lines = raw_text.splitlines()
    header = split_quoted(lines[0])
    out_header = [clean_field(header[0]) + "~" + clean_field(header[1]), "Lat", "Long"]
    for token in header[4:]:
        out_header.append(datetime.strptime(token, "%m/%d/%y").strftime("%m/%d/%Y"))
    out_lines = [",".join(out_header)]
    for line in lines[1:]:
        fields = [clean_field(f) for f in split_quoted(line)]
        row = [fields[0] + "~" + fields[1], fields[2], fields[3]]
        row.extend("" if v in ("", "0") else v for v in fields[4:])
        out_lines.append(",".join(row))
    return "\n".join(out_lines) + "\n"


def check_dataset(confirmed_text: str) -> None:
    lines = confirmed_text.splitlines()
    width = len(split_quoted(lines[0]))
    assert width == 4 + N_DAYS
    rows = {}
    for line in lines[1:]:
        fields = split_quoted(line)
        assert len(fields) == width, line
        rows[(fields[0], fields[1])] = fields
    morocco = rows[("", "Morocco")]
    assert morocco[2] == "31.7917" and morocco[3] == "-7.0926"
    assert morocco[4 + 39] == "0" and morocco[4 + 40] != "0"
    assert morocco[-1] == "617"
    assert ("British Columbia", "Canada") in rows
    assert ("", "Korea, South") in rows
    assert ("", "Taiwan*") in rows
    for single in ("Morocco", "France", "Spain", "Germany"):
        matching = [k for k in rows if k[1] == single]
        assert matching == [("", single)], matching
    for fields in rows.values():
        assert fields[2] not in ("", "0") and fields[3] not in ("", "0")


def main() -> None:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    confirmed, deaths = build_dataset()
    for name, series in (("confirmed", confirmed), ("deaths", deaths)):
        raw = raw_csv_text(series)
        if name == "confirmed":
            check_dataset(raw)
        stem = f"time_series_covid19_{name}_global"
        (FIXTURE_DIR / f"{stem}.csv").write_text(raw, encoding="utf-8", newline="\n")
        formatted = expected_formatted(raw)
        (GOLDEN_DIR / f"{stem}-sparse-with-formatted-column-names.csv").write_text(
            formatted, encoding="utf-8", newline="\n"
        )
        headerless = formatted.split("\n", 1)[1]
        (GOLDEN_DIR / f"{stem}-sparse.csv").write_text(
            headerless, encoding="utf-8", newline="\n"
        )
        print(f"{stem}: {raw.count(chr(10)) - 1} rows")


if __name__ == "__main__":
    main()
