"""Generates data/fixtures/covid_tweets_200.csv, a synthetic 200-row corpus
in the collected-dataset schema. Includes a few non-English rows, repeated
ids and malformed counts so every ingestion path is exercised."""
import csv
import pathlib
import random

ROOT = pathlib.Path(__file__).resolve().parent.parent
rng = random.Random(20200419)

HASHTAGS = ["covid19", "coronavirus", "covid", "lockdown", "stayhome", "staysafe",
            "socialdistancing", "quarantine", "covaccine", "homequarantine"]
HANDLES = ["Ash_TheLoneW", "NGvision2020", "Barnes_Law", "Joelpatrick1778", "GlblCtzn",
           "WHO", "CDCgov", "NHSuk", "MoHFW_INDIA", "nytimes", "BBCBreaking", "drsanjay"]
AUTHORS = ["EmpoweringGo", "Ibilola_Amao", "cliff_skidmore", "GMA4Trump", "Macgirl730",
           "kolkata_diary", "nurse_jo", "marta_sf", "daily_updates", "stayhome_dad"]
PLACES = ["Panjim Goa India", "London, England", "Texas, USA", "Choctaw, OK",
          "Menomonee Falls, WI", "Kolkata, India", "Lagos, Nigeria", "", "", ""]
SOURCE = '<a href="http://twitter.com/download/android" rel="nofollow">Twitter for Android</a>'

POSITIVE = [
    "Grateful to all the frontline heroes keeping us safe during the lockdown",
    "Great news, more patients recovered today, stay strong and hopeful",
    "Thank you doctors and nurses, your courage is amazing",
    "Happy to see my neighbours helping each other, kindness wins",
    "Good to see the curve improving, hope we beat this pandemic together",
    "Enjoying family time at home, love and peace to everyone",
    "Vaccine trials look encouraging, so hopeful about the recovery",
    "Proud of our community support, together we are stronger",
    "Wonderful volunteers delivering food, thanks for the help",
    "Stay home, stay safe and smile, better days are coming",
]
NEGATIVE = [
    "So many deaths today, this crisis is terrible and sad",
    "Scared and worried about my family, the virus is spreading fast",
    "Hospitals are failing, people are dying and nobody cares",
    "Lost my job in the lockdown, stressed and tired of this disaster",
    "Fake news and lies everywhere, the government response is a failure",
    "Angry that people ignore social distancing, stupid and dangerous",
    "Feeling lonely and anxious in quarantine, the pain is real",
    "Another tragic loss in our town, grief and fear everywhere",
    "Panic buying again, empty shelves and chaos in the stores",
    "Sick of this pandemic, the worst year and the problems keep growing",
]
NEUTRAL = [
    "Lockdown extended until May in several states",
    "New guidelines on wearing masks published this morning",
    "Covid 19 cases reported in the district as of Sunday",
    "The ministry will announce the testing figures tomorrow",
    "Schools remain closed as the lockdown continues",
    "Daily briefing on coronavirus scheduled at five",
    "Quarantine centers set up near the railway station",
    "Travel restrictions updated for international flights",
]
FOREIGN = [
    ("es", "Quedate en casa, la cuarentena continua #covid19"),
    ("fr", "Restez chez vous pendant le confinement #coronavirus"),
    ("es", "Nuevos casos confirmados hoy en Madrid"),
    ("de", "Bleibt zu Hause und bleibt gesund #stayhome"),
    ("fr", "Les hopitaux sont sous pression #covid"),
    ("hi", "Ghar par rahiye, surakshit rahiye #lockdown"),
    ("es", "Gracias a los medicos por su trabajo"),
    ("pt", "Fique em casa #quarentena"),
]


def decorate(text: str) -> tuple[str, list[str], list[str]]:
    tags = rng.sample(HASHTAGS, rng.randint(0, 2))
    mentions = rng.sample(HANDLES, rng.randint(0, 1))
    out = text
    if mentions and rng.random() < 0.6:
        out = f"RT @{mentions[0]}: {out}"
    elif mentions:
        out = f"{out} @{mentions[0]}"
    if tags:
        out += " " + " ".join(f"#{t}" for t in tags)
    if rng.random() < 0.4:
        out += f" https://t.co/{''.join(rng.choice('abcdefghijkLMNOP0123456789') for _ in range(10))}"
    if rng.random() < 0.2:
        out = out.replace("Covid 19", "COVID-19")
    return out, tags, mentions


def main() -> None:
    rows = []
    next_id = 1251934767211310000
    english = POSITIVE * 7 + NEGATIVE * 7 + NEUTRAL * 5
    rng.shuffle(english)
    english = english[:180]
    for text in english:
        body, tags, mentions = decorate(text)
        rows.append({
            "id": str(next_id), "created_at": "Sun Apr 19 14:%02d:%02d +0000 2020" % (rng.randint(0, 59), rng.randint(0, 59)),
            "source": SOURCE, "original_text": body, "lang": "en",
            "favorite_count": str(rng.randint(0, 50)), "retweet_count": str(rng.randint(0, 6000)),
            "original_author": rng.choice(AUTHORS), "hashtags": ", ".join(tags),
            "user_mentions": ", ".join(mentions), "place": rng.choice(PLACES),
        })
        next_id -= rng.randint(1000, 90000)
    for lang, text in FOREIGN:
        rows.append({
            "id": str(next_id), "created_at": "Mon Apr 20 09:12:00 +0000 2020", "source": SOURCE,
            "original_text": text, "lang": lang, "favorite_count": "0", "retweet_count": str(rng.randint(0, 100)),
            "original_author": rng.choice(AUTHORS), "hashtags": "", "user_mentions": "", "place": "",
        })
        next_id -= 777
    # Repeated ids (re-collected tweets) and malformed count fields.
    for i in range(10):
        rows.append(dict(rows[rng.randrange(0, 60)]))
    rows[-2]["retweet_count"] = "n/a"
    rows[-1]["favorite_count"] = "-3"
    rows.append({**rows[5], "id": str(next_id - 1), "retweet_count": "abc"})
    rows.append({**rows[6], "id": str(next_id - 2), "original_text": ""})
    assert len(rows) == 200, len(rows)

    out = ROOT / "data" / "fixtures" / "covid_tweets_200.csv"
    fields = ["id", "created_at", "source", "original_text", "lang", "favorite_count",
              "retweet_count", "original_author", "hashtags", "user_mentions", "place"]
    with out.open("w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=fields, lineterminator="\r\n")
        w.writeheader()
        w.writerows(rows)
    print(f"wrote {len(rows)} rows to {out}")


if __name__ == "__main__":
    main()
