#!/usr/bin/env python3
"""Generates the bundled offline catalog under data/catalog.

The texts are synthetic prose assembled from sentence templates with a fixed
seed, so the catalog is reproducible and free of third-party content.

    python3 tools/make_catalog.py data/catalog
"""
import json
import random
import sys
from pathlib import Path

SEED = 20240611

NAMES = ["Adela", "Bastian", "Corin", "Delphine", "Emrys", "Fenna", "Gideon", "Hollis",
         "Isolde", "Jasper", "Kestrel", "Linnea", "Marlow", "Nerys", "Oren", "Perpetua",
         "Quill", "Rowena", "Silas", "Tamsin", "Ulric", "Vesper", "Wren", "Yara", "Zephyr"]
PLACES = ["the harbour", "the old lighthouse", "a salt marsh", "the clock tower", "the orchard",
          "a mountain pass", "the flooded library", "a desert observatory", "the night market",
          "the glass greenhouse", "an abandoned mill", "the river delta", "a frozen lake",
          "the cathedral roof", "a copper mine", "the botanical garden", "the lantern quarter"]
OBJECTS = ["a brass compass", "an unsigned letter", "a cracked hourglass", "a silver key",
           "a map drawn in ink", "a violin case", "a jar of marbles", "a torn photograph",
           "a wooden kite", "a velvet notebook", "a ship in a bottle", "a rusted telescope",
           "a pocket watch", "a bundle of feathers", "a porcelain fox", "a lantern"]
ADJECTIVES = ["quiet", "restless", "curious", "stubborn", "gentle", "fearless", "weary",
              "clever", "patient", "reckless", "hopeful", "secretive", "luminous", "brittle",
              "amber", "crimson", "velvet", "thunderous", "whispering", "forgotten"]
VERBS = ["wandered", "hesitated", "listened", "laughed", "apologized", "remembered",
         "whispered", "searched", "waited", "promised", "climbed", "stumbled", "gathered",
         "watched", "borrowed", "followed", "painted", "counted", "sang", "argued"]
NOUNS = ["storm", "river", "meadow", "lantern", "feather", "mirror", "garden", "ember",
         "harvest", "compass", "tide", "sparrow", "glacier", "violin", "orchid", "canyon",
         "thimble", "galaxy", "pebble", "chimney", "saffron", "walnut", "falcon", "ribbon"]
TIMES = ["at dawn", "long after midnight", "before the rain", "in early spring",
         "during the festival", "as the tide turned", "on the last day of autumn",
         "while the city slept", "under a pale moon", "in the hour before supper"]

BOOK_TEMPLATES = [
    "{Name} {verb} near {place} {time}, holding {object} as if it might vanish.",
    "Nobody in {place} had seen a {adj} {noun} like that before, and {name} knew it.",
    "\"We should not be here,\" {Name} said, but {name2} only {verb} and pointed at the {noun}.",
    "The {noun} was {adj}, and the air smelled of {noun2} and wet stone.",
    "{Name} had {verb} for years, yet the {adj} {noun} still felt new.",
    "By the time they reached {place}, the {noun} had already gone {adj}.",
    "It was {time} when {name2} finally {verb}, and {Name} pretended not to notice.",
    "Somewhere beyond {place}, a {adj} {noun} answered the call of the {noun2}.",
    "{Name} wrote the word {noun} in the margin, then crossed it out twice.",
    "They {verb} together past {place}, counting every {noun} along the way.",
    "{Name} had not expected {object}, least of all one so {adj}.",
    "The letter said only this: meet me at {place} {time}, and bring the {noun}.",
]
MOVIE_TEMPLATES = [
    "A {adj} {role} named {Name} discovers {object} hidden in {place}.",
    "When the {noun} threatens {place}, {Name} must team up with a {adj} {role}.",
    "Years later, {name2} returns to {place} to settle an old debt.",
    "What begins as a simple search for a {noun} turns into a {adj} race against time.",
    "Along the way, {Name} learns that the {noun2} was never what it seemed.",
    "Set {time}, the story follows {Name} and {name2} through {place}.",
    "A {adj} comedy about friendship, {noun2}s, and {object}.",
]
IMAGE_TEMPLATES = [
    "A {adj} {noun} photographed {time} near {place}.",
    "Close view of {object} resting beside a {adj} {noun2}.",
    "Wide shot of {place} with a {adj} sky and a single {noun}.",
]
ROLES = ["cartographer", "baker", "detective", "violinist", "lighthouse keeper", "pilot",
         "botanist", "thief", "librarian", "astronomer", "chef", "courier"]
TAGS = ["nature", "green", "urban", "travel", "vintage", "macro", "minimal", "night",
        "ocean", "forest", "winter", "summer", "architecture", "texture", "wildlife",
        "sunset", "mist", "reflection", "pattern", "street"]

BOOK_TITLES = ["The Lantern Quarter", "A Compass for Wren", "Salt and Saffron",
               "The Clockmaker's Apology", "Letters from the Delta", "The Glass Greenhouse",
               "Harvest of Embers", "The Sparrow Accord", "Under a Pale Moon",
               "The Thimble Conspiracy", "Marlow and the Tide", "The Velvet Notebook",
               "Where Falcons Wait", "The Copper Mine Ghost", "An Orchard in Winter",
               "The Last Violin", "Breathe Again", "Theory of Pebbles", "The Hobbyist",
               "Walnut Street Mysteries", "The Ribbon Road", "Canyon of Echoes",
               "The Mirror Garden", "Tales from the Lighthouse"]
MOVIE_TITLES = ["Night Market", "The Ember Protocol", "Glacier Run", "Paper Kites",
                "The Borrowed Summer", "Orchid Heist", "Galaxy Street", "The Chimney Sweep",
                "Falcon Hill", "Meadowlark", "The Saffron Route", "Storm Season",
                "Lanterns Over the Bay", "The Quiet Cartographer", "Tidewater",
                "The Marble Jar", "Copper and Ash", "The Patient Thief", "River of Mirrors",
                "Feathers in Winter", "Thunder Road Bakery", "The Pale Observatory",
                "Harbour Lights", "The Pocket Watch"]
IMAGE_TITLES = ["Misty Forest Path", "Green Fern Macro", "City Lights at Night",
                "Frozen Lake Sunrise", "Desert Dunes", "Harbour Reflections",
                "Autumn Orchard", "Mountain Pass Clouds", "Copper Rooftops",
                "Botanical Glasshouse", "Street Market Lanterns", "Ocean Spray",
                "Winter Birch Grove", "Old Mill Wheel", "Falcon in Flight",
                "Saffron Fields", "River Delta from Above", "Cathedral Arches",
                "Pebble Beach Pattern", "Sparrow on a Wire", "Rainy Window",
                "Canyon Sunset", "Lighthouse Beam", "Green Moss Texture"]


def fill(template, rng):
    name, name2 = rng.sample(NAMES, 2)
    return template.format(
        Name=name, name=name, name2=name2, place=rng.choice(PLACES), time=rng.choice(TIMES),
        object=rng.choice(OBJECTS), adj=rng.choice(ADJECTIVES), verb=rng.choice(VERBS),
        noun=rng.choice(NOUNS), noun2=rng.choice(NOUNS), role=rng.choice(ROLES))


def prose(templates, rng, min_words, sentences_per_paragraph=5):
    paragraphs = []
    words = 0
    while words < min_words:
        paragraph = " ".join(fill(rng.choice(templates), rng)
                             for _ in range(sentences_per_paragraph))
        words += len(paragraph.split())
        paragraphs.append(paragraph)
    return "\n\n".join(paragraphs) + "\n"


def main():
    root = Path(sys.argv[1] if len(sys.argv) > 1 else "data/catalog")
    rng = random.Random(SEED)
    manifest = []
    for category, titles, templates, min_words in [
        ("books", BOOK_TITLES, BOOK_TEMPLATES, 700),
        ("movies", MOVIE_TITLES, MOVIE_TEMPLATES, 160),
        ("images", IMAGE_TITLES, IMAGE_TEMPLATES, 55),
    ]:
        (root / category).mkdir(parents=True, exist_ok=True)
        for n, title in enumerate(titles, 1):
            item_id = f"{category[:-1]}_{n:02d}"
            text = prose(templates, rng, min_words, 5 if category == "books" else 3)
            if category == "images":
                text = text.rstrip("\n") + "\nTags: " + ", ".join(rng.sample(TAGS, 6)) + "\n"
            (root / category / f"{item_id}.txt").write_text(text, encoding="utf-8")
            manifest.append({
                "item_id": item_id,
                "category": category,
                "title": title,
                "cover": f"covers/{item_id}.svg",
                "text": f"{category}/{item_id}.txt",
            })
    (root / "catalog.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
