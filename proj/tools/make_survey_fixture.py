#!/usr/bin/env python3
"""Generate the synthetic survey fixture (data/survey_fixture.tsv).

Rows are synthetic. Marginals for gender, race, education, income and mean age
are matched exactly by construction; everything else is drawn from a seeded
RNG so the file is reproducible.
"""
import random
import sys

N = 500
rng = random.Random(20200701)

COLUMNS = [
    "id", "age", "gender", "race", "education", "income_class", "religion",
    "state", "therm_dem", "therm_rep", "therm_figures", "vote_2020",
    "discuss_politics", "social_media_freq", "news_sources",
    "nonpolitical_interests",
]


def exact(counts):
    """Shuffle a list that realizes the given label counts; pads with ''."""
    out = []
    for label, c in counts:
        out += [label] * c
    out += [""] * (N - len(out))
    rng.shuffle(out)
    return out


gender = exact([("male", 271), ("female", 229)])
race = exact([("White", 332), ("Black", 35), ("Hispanic", 74),
              ("Native American", 8), ("Asian", 22), ("Multiple Races", 29)])
education = exact([("high school", 258), ("a bachelor's degree", 141),
                   ("a graduate degree", 84), ("less than high school", 12)])
income = exact([("upper income", 113), ("middle income", 261),
                ("lower income", 118)])

# Ages: right-skewed draw, then nudged so the sum is exactly 38.14 * N.
ages = [min(85, 18 + int(rng.gammavariate(2.0, 10.0))) for _ in range(N)]
target = round(38.14 * N)
while sum(ages) != target:
    i = rng.randrange(N)
    if sum(ages) < target and ages[i] < 85:
        ages[i] += 1
    elif sum(ages) > target and ages[i] > 18:
        ages[i] -= 1

RELIGIONS = ["Protestant", "Catholic", "Jewish", "Muslim", "Mormon",
             "atheist", "agnostic", "nothing in particular"]
STATES = ["California", "Texas", "Florida", "New York", "Pennsylvania",
          "Illinois", "Ohio", "Georgia", "North Carolina", "Michigan",
          "Arizona", "Washington", "Colorado", "Alabama", "Minnesota",
          "Wisconsin", "Oregon", "Tennessee", "Virginia", "Nevada"]
FIGURES = ["Joe Biden", "Donald Trump", "Black Lives Matter", "the police",
           "scientists", "feminists", "evangelical Christians",
           "labor unions", "big business"]
LEFT_OUTLETS = ["cnn", "nyt", "wapo", "npr", "msnbc", "abc", "nbc"]
RIGHT_OUTLETS = ["fox", "breitbart", "wsj"]
CENTER_OUTLETS = ["ap", "reuters", "usatoday", "cbs", "abc"]
INTERESTS = ["fishing", "hunting", "cooking", "gardening", "video games",
             "basketball", "football", "country music", "hiking",
             "knitting", "reality TV", "woodworking", "photography",
             "baseball", "true crime podcasts", "yoga", "board games"]
DISCUSS = [("never", 45), ("rarely", 20), ("sometimes", 18), ("often", 10),
           ("very often", 7)]
MEDIA = [("never", 10), ("once a week", 15), ("a few times a week", 20),
         ("once a day", 25), ("many times a day", 30)]


def weighted(pairs):
    total = sum(w for _, w in pairs)
    u = rng.uniform(0, total)
    acc = 0
    for label, w in pairs:
        acc += w
        if u <= acc:
            return label
    return pairs[-1][0]


def clamp(x):
    return max(0, min(100, int(round(x))))


rows = []
for i in range(N):
    # Latent lean in [-1, 1]; Twitter users skew Democratic.
    lean = max(-1.0, min(1.0, rng.gauss(0.18, 0.45)))
    if rng.random() < 0.03:
        t_dem = t_rep = ""
    else:
        t_dem = str(clamp(50 + 45 * lean + rng.gauss(0, 12)))
        t_rep = str(clamp(50 - 45 * lean + rng.gauss(0, 12)))

    figs = []
    for name in rng.sample(FIGURES, rng.randint(0, 4)):
        sign = 1 if name in ("Joe Biden", "Black Lives Matter", "scientists",
                             "feminists", "labor unions") else -1
        figs.append(f"{name}={clamp(50 + 50 * sign * lean + rng.gauss(0, 20))}")

    if rng.random() < 0.08:
        vote = ""
    elif rng.random() < 0.2:
        vote = "did not vote"
    else:
        vote = "Joe Biden" if lean + rng.gauss(0, 0.3) > 0 else "Donald Trump"

    if lean > 0.25:
        pool = LEFT_OUTLETS + CENTER_OUTLETS
    elif lean < -0.25:
        pool = RIGHT_OUTLETS + CENTER_OUTLETS
    else:
        pool = CENTER_OUTLETS + LEFT_OUTLETS[:2] + RIGHT_OUTLETS[:1]
    pool = sorted(set(pool))
    sources = [] if rng.random() < 0.04 else rng.sample(pool, rng.randint(1, 3))

    interests = "" if rng.random() < 0.1 else ";".join(
        rng.sample(INTERESTS, rng.randint(1, 3)))

    rows.append([
        f"r{i + 1:04d}",
        str(ages[i]),
        gender[i],
        race[i],
        education[i],
        income[i],
        "" if rng.random() < 0.06 else rng.choice(RELIGIONS),
        "" if rng.random() < 0.02 else rng.choice(STATES),
        t_dem,
        t_rep,
        ";".join(figs),
        vote,
        "" if rng.random() < 0.03 else weighted(DISCUSS),
        weighted(MEDIA),
        ";".join(sources),
        interests,
    ])

out = open(sys.argv[1], "w", encoding="utf-8") if len(sys.argv) > 1 else sys.stdout
out.write("# feedsim survey v1: tab-separated, one respondent per line, empty field = absent.\n")
out.write("# Lists use ';'. therm_figures entries are name=value with value in [0,100].\n")
out.write("\t".join(COLUMNS) + "\n")
for r in rows:
    out.write("\t".join(r) + "\n")
