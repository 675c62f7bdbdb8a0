#!/usr/bin/env python3
"""Regenerate the data assets shipped with the package.

Writes into src/bodymap/data/:
  template.png   two-silhouette body-map background
  atlas.json     214 regions + 7 conditions over that template
  breeds.json    149-breed knowledge base
  few_shot.json  four in-context example documentations (9..51 findings)
  diagnoses.txt  136-label pool of non-patellar diagnoses

The region placement is schematic: labels are real canine anatomy, but
coordinates only aim for a readable layout on the silhouettes.
"""

from __future__ import annotations

import json
from pathlib import Path

from PIL import Image, ImageDraw

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "bodymap" / "data"

CANVAS_W, CANVAS_H = 1240, 620
AXIS_Y = 310
SUPINE_X0 = 40
PRONE_X0 = 660

# ---------------------------------------------------------------------------
# Region tables.  Paired parts produce a right region (odd index) and a left
# region (even index); the physical-left region sits on the lower half in the
# supine view and on the upper half in the prone view, so the two views are
# mirror images of each other.
#
# Rect parts: (label, "rect", x_rel, dy, w, h, tags)
# Circle parts: (label, "circle", cx_rel, dcy, r, tags)
# ---------------------------------------------------------------------------

PST = "patellar_soft_tissue"

SUPINE_PAIRED = [
    ("shoulder joint", "rect", 195, 50, 26, 18, ()),
    ("elbow joint", "rect", 205, 85, 26, 16, ()),
    ("carpal joint", "rect", 215, 115, 24, 14, ()),
    ("hip joint", "rect", 465, 50, 26, 18, ("hip_joint",)),
    ("tarsal joint", "rect", 500, 112, 24, 14, ()),
    ("knee joint", "rect", 480, 82, 26, 16, ("knee_joint",)),
    ("sternocephalicus", "rect", 130, 8, 55, 14, ()),
    ("brachiocephalicus", "rect", 128, 26, 60, 14, ()),
    ("superficial pectoral", "rect", 205, 6, 48, 16, ()),
    ("deep pectoral", "rect", 255, 10, 52, 16, ()),
    ("serratus ventralis cervicis", "rect", 180, 30, 40, 13, ()),
    ("serratus ventralis thoracis", "rect", 262, 30, 48, 13, ()),
    ("rectus abdominis", "rect", 330, 6, 85, 15, ()),
    ("external abdominal oblique", "rect", 340, 24, 75, 14, ()),
    ("internal abdominal oblique", "rect", 350, 40, 65, 13, ()),
    ("iliopsoas", "rect", 430, 16, 48, 12, ()),
    ("sartorius", "rect", 452, 32, 44, 12, (PST,)),
    ("biceps brachii", "rect", 192, 70, 36, 13, ()),
    ("brachialis", "rect", 232, 72, 28, 12, ()),
    ("coracobrachialis", "rect", 178, 56, 30, 11, ()),
    ("triceps brachii medial head", "rect", 230, 56, 34, 12, ()),
    ("pronator teres", "rect", 200, 100, 26, 10, ()),
    ("flexor carpi radialis", "rect", 216, 102, 26, 10, ()),
    ("flexor carpi ulnaris", "rect", 232, 104, 26, 10, ()),
    ("superficial digital flexor of the forelimb", "rect", 218, 130, 30, 10, ()),
    ("deep digital flexor of the forelimb", "rect", 234, 142, 30, 10, ()),
    ("carpal flexor tendons", "rect", 228, 154, 28, 9, ()),
    ("forepaw pads", "circle", 244, 172, 8, ()),
    ("gracilis", "rect", 470, 40, 40, 12, (PST,)),
    ("pectineus", "rect", 452, 56, 30, 11, ()),
    ("adductor", "rect", 486, 56, 36, 12, (PST,)),
    ("vastus medialis", "rect", 452, 68, 34, 12, (PST,)),
    ("rectus femoris", "rect", 436, 44, 36, 12, (PST,)),
    ("medial thigh fascia", "rect", 502, 44, 30, 11, (PST,)),
    ("gastrocnemius medial head", "rect", 492, 98, 34, 11, (PST,)),
    ("tibialis caudalis", "rect", 476, 110, 30, 10, (PST,)),
    ("superficial digital flexor of the hindlimb", "rect", 498, 124, 32, 10, ()),
    ("deep digital flexor of the hindlimb", "rect", 506, 136, 32, 10, ()),
    ("tarsal flexor tendons", "rect", 512, 148, 28, 9, ()),
    ("hindpaw pads", "circle", 522, 168, 8, ()),
    ("biceps tendon origin", "circle", 200, 64, 6, ()),
    ("medial elbow point", "circle", 212, 90, 6, ()),
    ("axillary region", "circle", 232, 42, 7, ()),
    ("inguinal region", "circle", 448, 28, 7, ()),
    ("patellar ligament", "circle", 490, 94, 6, (PST,)),
    ("medial meniscus area", "circle", 500, 86, 6, (PST,)),
    ("medial popliteal fossa", "circle", 508, 78, 6, (PST,)),
    ("groin fold", "rect", 438, 42, 30, 10, ()),
]

SUPINE_MIDLINE = [
    ("sternum", 252, 50, 10),
    ("umbilical region", 370, 24, 10),
]

PRONE_PAIRED = [
    ("temporalis", "rect", 40, 18, 30, 12, ()),
    ("masseter", "rect", 56, 34, 28, 12, ()),
    ("splenius", "rect", 128, 12, 50, 13, ()),
    ("omotransversarius", "rect", 134, 28, 48, 12, ()),
    ("trapezius cervical part", "rect", 180, 10, 42, 13, ()),
    ("trapezius thoracic part", "rect", 224, 10, 46, 13, ()),
    ("rhomboideus cervicis", "rect", 176, 24, 38, 12, ()),
    ("rhomboideus thoracis", "rect", 218, 24, 40, 12, ()),
    ("supraspinatus", "rect", 188, 38, 36, 13, ()),
    ("infraspinatus", "rect", 206, 52, 36, 13, ()),
    ("deltoideus scapular part", "rect", 226, 44, 32, 12, ()),
    ("deltoideus acromial part", "rect", 240, 58, 28, 11, ()),
    ("teres major", "rect", 212, 66, 30, 11, ()),
    ("teres minor", "rect", 236, 70, 26, 10, ()),
    ("triceps brachii long head", "rect", 226, 82, 34, 12, ()),
    ("triceps brachii lateral head", "rect", 246, 94, 30, 11, ()),
    ("extensor carpi radialis", "rect", 222, 106, 28, 10, ()),
    ("common digital extensor of the forelimb", "rect", 236, 118, 30, 10, ()),
    ("lateral digital extensor of the forelimb", "rect", 248, 130, 28, 9, ()),
    ("extensor carpi ulnaris", "rect", 258, 108, 26, 9, ()),
    ("carpal extensor tendons", "rect", 244, 144, 26, 9, ()),
    ("latissimus dorsi", "rect", 272, 46, 60, 14, ()),
    ("serratus dorsalis cranialis", "rect", 268, 32, 44, 12, ()),
    ("serratus dorsalis caudalis", "rect", 330, 32, 44, 12, ()),
    ("iliocostalis thoracis", "rect", 284, 20, 52, 12, ()),
    ("iliocostalis lumborum", "rect", 352, 20, 48, 12, ()),
    ("longissimus thoracis", "rect", 290, 7, 58, 12, ()),
    ("longissimus lumborum", "rect", 352, 7, 52, 12, ()),
    ("multifidus lumborum", "rect", 406, 8, 40, 11, ()),
    ("quadratus lumborum", "rect", 398, 22, 42, 11, ()),
    ("gluteus superficialis", "rect", 448, 22, 34, 12, ()),
    ("gluteus medius", "rect", 432, 9, 34, 12, ()),
    ("gluteus profundus", "rect", 456, 36, 30, 11, ()),
    ("tensor fasciae latae", "rect", 434, 44, 32, 12, (PST,)),
    ("biceps femoris", "rect", 460, 58, 40, 13, (PST,)),
    ("semitendinosus", "rect", 474, 72, 38, 12, (PST,)),
    ("semimembranosus", "rect", 456, 84, 36, 12, (PST,)),
    ("vastus lateralis", "rect", 436, 64, 34, 12, (PST,)),
    ("lateral knee area", "rect", 470, 96, 32, 11, (PST,)),
    ("gastrocnemius lateral head", "rect", 484, 108, 32, 11, (PST,)),
    ("tibialis cranialis", "rect", 464, 120, 30, 10, (PST,)),
    ("peroneus longus", "rect", 478, 132, 28, 10, (PST,)),
    ("long digital extensor of the hindlimb", "rect", 494, 120, 30, 10, (PST,)),
    ("lateral digital extensor of the hindlimb", "rect", 496, 144, 28, 9, (PST,)),
    ("achilles tendon", "rect", 506, 132, 24, 9, (PST,)),
    ("scapular spine point", "circle", 202, 32, 6, ()),
    ("acromion point", "circle", 242, 52, 6, ()),
    ("olecranon point", "circle", 254, 88, 6, ()),
    ("iliac crest point", "circle", 428, 18, 7, ()),
    ("greater trochanter point", "circle", 454, 48, 7, ()),
    ("ischiatic tuberosity point", "circle", 482, 42, 6, ()),
    ("popliteal lymph node region", "circle", 488, 98, 6, (PST,)),
]

PRONE_MIDLINE = [
    ("occipital crest", 28, 26, 12),
    ("cervical spine", 120, 56, 12),
    ("cranial thoracic spine", 258, 48, 12),
    ("caudal thoracic spine", 306, 48, 12),
    ("thoracolumbar junction", 354, 20, 12),
    ("cranial lumbar spine", 374, 34, 12),
    ("caudal lumbar spine", 408, 30, 12),
    ("lumbosacral junction", 438, 16, 12),
    ("sacrum", 454, 24, 12),
    ("tail base", 478, 22, 12),
    ("tail middle", 500, 22, 12),
    ("tail tip", 522, 20, 12),
]

CONDITIONS = [
    (1, "pain", (235, 140, 0)),
    (2, "tension", (0, 90, 200)),
    (3, "acute inflammation", (255, 0, 0)),
    (4, "swelling", (0, 150, 60)),
    (5, "warmth", (200, 0, 200)),
    (6, "atrophy", (120, 80, 40)),
    (7, "chronic change", (0, 0, 0)),
]


def _paired_regions(parts, view, x0, next_index):
    """Emit (right, left) regions per part; left is index-even."""
    regions = []
    for part in parts:
        label, shape = part[0], part[1]
        for side in ("right", "left"):
            # supine: left side of the dog is drawn on the lower half;
            # prone is mirrored (left on the upper half).
            lower = (side == "left") == (view == "supine")
            if shape == "rect":
                _, _, x, dy, w, h, tags = part
                y = AXIS_Y + dy if lower else AXIS_Y - dy - h
                geometry = {"x": x0 + x, "y": y, "w": w, "h": h}
            else:
                _, _, cx, dcy, r, tags = part
                cy = AXIS_Y + dcy if lower else AXIS_Y - dcy
                geometry = {"cx": x0 + cx, "cy": cy, "r": r}
            regions.append(
                {
                    "index": next_index,
                    "label": f"{side} {label}",
                    "view": view,
                    "side": side,
                    "shape": "rectangle" if shape == "rect" else "circle",
                    "geometry": geometry,
                    "tags": list(tags),
                }
            )
            next_index += 1
    return regions, next_index


def _midline_regions(parts, view, x0, next_index):
    regions = []
    for label, x, w, h in parts:
        regions.append(
            {
                "index": next_index,
                "label": label,
                "view": view,
                "side": "midline",
                "shape": "rectangle",
                "geometry": {"x": x0 + x, "y": AXIS_Y - h // 2, "w": w, "h": h},
                "tags": [],
            }
        )
        next_index += 1
    return regions, next_index


def build_atlas() -> dict:
    regions = []
    idx = 1
    part, idx = _paired_regions(SUPINE_PAIRED, "supine", SUPINE_X0, idx)
    regions += part
    part, idx = _midline_regions(SUPINE_MIDLINE, "supine", SUPINE_X0, idx)
    regions += part
    part, idx = _paired_regions(PRONE_PAIRED, "prone", PRONE_X0, idx)
    regions += part
    part, idx = _midline_regions(PRONE_MIDLINE, "prone", PRONE_X0, idx)
    regions += part

    assert len(regions) == 214, len(regions)
    knee_left = next(r for r in regions if r["label"] == "left knee joint")
    assert knee_left["index"] == 12, knee_left["index"]
    for r in regions:
        g = r["geometry"]
        if r["shape"] == "rectangle":
            x0, y0, x1, y1 = g["x"], g["y"], g["x"] + g["w"], g["y"] + g["h"]
        else:
            x0, y0 = g["cx"] - g["r"], g["cy"] - g["r"]
            x1, y1 = g["cx"] + g["r"], g["cy"] + g["r"]
        # keep 12 px of slack for stroke jitter at render time
        assert 12 <= x0 and 12 <= y0 and x1 <= CANVAS_W - 12 and y1 <= CANVAS_H - 12, r

    return {
        "template": {"path": "template.png", "width": CANVAS_W, "height": CANVAS_H},
        "conditions": [
            {"index": i, "label": label, "color": list(color)}
            for i, label, color in CONDITIONS
        ],
        "regions": regions,
    }


# ---------------------------------------------------------------------------
# Template image
# ---------------------------------------------------------------------------

BODY_FILL = (235, 235, 235)
BODY_LINE = (130, 130, 130)


def _draw_dog(draw: ImageDraw.ImageDraw, x0: int, caption: str) -> None:
    def ell(x_a, y_a, x_b, y_b):
        draw.ellipse([x0 + x_a, y_a, x0 + x_b, y_b], fill=BODY_FILL, outline=BODY_LINE, width=2)

    # legs (under the body so joints look attached)
    for lx in (195, 455):
        for y_a, y_b in ((128, 240), (380, 492)):
            draw.rounded_rectangle(
                [x0 + lx, y_a, x0 + lx + 38, y_b],
                radius=14, fill=BODY_FILL, outline=BODY_LINE, width=2,
            )
        # paws
        ell(lx - 6, 96, lx + 52, 136)
        ell(lx - 6, 484, lx + 52, 524)
    # body, neck, head
    ell(115, 230, 525, 390)
    draw.polygon(
        [(x0 + 120, 260), (x0 + 185, 245), (x0 + 185, 375), (x0 + 120, 360)],
        fill=BODY_FILL, outline=BODY_LINE,
    )
    ell(18, 233, 126, 337)
    ell(0, 290, 40, 330)  # muzzle
    draw.polygon(
        [(x0 + 52, 244), (x0 + 30, 196), (x0 + 86, 222)],
        fill=BODY_FILL, outline=BODY_LINE,
    )  # ear
    # tail
    draw.polygon(
        [(x0 + 515, 296), (x0 + 568, 276), (x0 + 571, 290), (x0 + 518, 312)],
        fill=BODY_FILL, outline=BODY_LINE,
    )
    # midline hint
    draw.line([x0 + 40, AXIS_Y, x0 + 540, AXIS_Y], fill=(205, 205, 205), width=1)
    draw.text((x0 + 210, 30), caption, fill=(90, 90, 90))


def build_template() -> Image.Image:
    img = Image.new("RGB", (CANVAS_W, CANVAS_H), (255, 255, 255))
    draw = ImageDraw.Draw(img)
    _draw_dog(draw, SUPINE_X0, "supine view (ventral)")
    _draw_dog(draw, PRONE_X0, "prone view (dorsal)")
    draw.line([620, 40, 620, CANVAS_H - 40], fill=(215, 215, 215), width=2)
    return img


# ---------------------------------------------------------------------------
# Breed knowledge base: (name, male W_min kg, male W_max kg, male life years).
# Female values are derived (lighter, slightly longer-lived).  Values are
# curated approximations, not zoological reference data.
# ---------------------------------------------------------------------------

BREEDS = [
    ("Affenpinscher", 3.0, 6.0, 13.0),
    ("Afghan Hound", 23.0, 27.0, 12.5),
    ("Airedale Terrier", 23.0, 29.0, 11.5),
    ("Akita", 32.0, 45.0, 10.5),
    ("Alaskan Malamute", 36.0, 43.0, 11.0),
    ("American Bulldog", 30.0, 58.0, 11.5),
    ("American Cocker Spaniel", 11.0, 14.0, 13.5),
    ("American Eskimo Dog", 8.0, 16.0, 13.5),
    ("American Foxhound", 29.0, 34.0, 11.5),
    ("American Staffordshire Terrier", 18.0, 32.0, 12.5),
    ("American Water Spaniel", 13.0, 20.0, 12.0),
    ("Anatolian Shepherd Dog", 50.0, 65.0, 11.5),
    ("Australian Cattle Dog", 15.0, 22.0, 13.5),
    ("Australian Kelpie", 14.0, 21.0, 12.5),
    ("Australian Shepherd", 23.0, 29.0, 13.0),
    ("Australian Terrier", 6.0, 7.0, 12.5),
    ("Azawakh", 20.0, 25.0, 12.5),
    ("Basenji", 10.0, 12.0, 13.5),
    ("Basset Hound", 23.0, 29.0, 11.5),
    ("Beagle", 10.0, 11.5, 13.0),
    ("Bearded Collie", 18.0, 27.0, 13.5),
    ("Beauceron", 32.0, 45.0, 11.0),
    ("Bedlington Terrier", 7.7, 10.4, 13.5),
    ("Belgian Malinois", 25.0, 30.0, 12.5),
    ("Belgian Tervuren", 25.0, 30.0, 12.5),
    ("Bernese Mountain Dog", 38.0, 50.0, 8.0),
    ("Bichon Frise", 5.0, 8.0, 14.0),
    ("Black Russian Terrier", 50.0, 60.0, 10.5),
    ("Bloodhound", 41.0, 50.0, 10.0),
    ("Border Collie", 14.0, 20.0, 13.5),
    ("Border Terrier", 5.9, 7.1, 13.5),
    ("Borzoi", 34.0, 48.0, 10.5),
    ("Boston Terrier", 6.0, 11.0, 13.0),
    ("Bouvier des Flandres", 35.0, 54.0, 10.5),
    ("Boxer", 27.0, 32.0, 10.0),
    ("Briard", 27.0, 41.0, 11.0),
    ("Brittany", 14.0, 18.0, 13.0),
    ("Brussels Griffon", 3.5, 6.0, 13.5),
    ("Bull Terrier", 22.0, 38.0, 12.0),
    ("Bulldog", 23.0, 25.0, 8.5),
    ("Bullmastiff", 50.0, 59.0, 8.5),
    ("Cairn Terrier", 6.0, 7.5, 13.5),
    ("Canaan Dog", 18.0, 25.0, 13.0),
    ("Cane Corso", 45.0, 50.0, 10.0),
    ("Cardigan Welsh Corgi", 14.0, 17.0, 13.5),
    ("Cavalier King Charles Spaniel", 5.9, 8.2, 11.5),
    ("Chesapeake Bay Retriever", 29.0, 36.0, 11.5),
    ("Chihuahua", 1.8, 2.7, 15.0),
    ("Chinese Crested", 3.5, 5.5, 13.5),
    ("Chinese Shar-Pei", 20.0, 27.0, 10.5),
    ("Chow Chow", 25.0, 32.0, 11.0),
    ("Clumber Spaniel", 29.0, 39.0, 11.5),
    ("Collie", 20.0, 34.0, 13.0),
    ("Coton de Tulear", 4.0, 6.0, 14.5),
    ("Curly-Coated Retriever", 32.0, 41.0, 11.0),
    ("Dachshund", 7.3, 14.5, 13.5),
    ("Dalmatian", 24.0, 32.0, 12.5),
    ("Dandie Dinmont Terrier", 8.0, 11.0, 13.0),
    ("Doberman Pinscher", 34.0, 45.0, 10.5),
    ("Dogo Argentino", 40.0, 45.0, 10.5),
    ("Dogue de Bordeaux", 54.0, 65.0, 7.5),
    ("English Cocker Spaniel", 13.0, 16.0, 13.0),
    ("English Foxhound", 29.0, 34.0, 11.5),
    ("English Setter", 29.0, 36.0, 11.5),
    ("English Springer Spaniel", 20.0, 25.0, 12.5),
    ("English Toy Spaniel", 3.6, 6.4, 11.5),
    ("Entlebucher Mountain Dog", 20.0, 30.0, 12.5),
    ("Field Spaniel", 16.0, 23.0, 12.5),
    ("Finnish Lapphund", 15.0, 24.0, 13.0),
    ("Finnish Spitz", 12.0, 13.0, 13.5),
    ("Flat-Coated Retriever", 27.0, 36.0, 9.5),
    ("French Bulldog", 9.0, 13.0, 10.5),
    ("German Pinscher", 11.0, 20.0, 13.0),
    ("German Shepherd", 30.0, 40.0, 10.5),
    ("German Shorthaired Pointer", 25.0, 32.0, 12.5),
    ("German Wirehaired Pointer", 27.0, 32.0, 13.0),
    ("Giant Schnauzer", 27.0, 48.0, 11.0),
    ("Glen of Imaal Terrier", 15.0, 16.0, 12.5),
    ("Golden Retriever", 30.0, 34.0, 11.5),
    ("Gordon Setter", 25.0, 36.0, 11.5),
    ("Great Dane", 54.0, 90.0, 7.5),
    ("Great Pyrenees", 45.0, 54.0, 10.5),
    ("Greater Swiss Mountain Dog", 39.0, 64.0, 9.5),
    ("Greyhound", 27.0, 40.0, 11.5),
    ("Harrier", 20.0, 27.0, 12.5),
    ("Havanese", 4.5, 7.3, 14.0),
    ("Ibizan Hound", 20.0, 23.0, 12.5),
    ("Icelandic Sheepdog", 9.0, 14.0, 13.5),
    ("Irish Red and White Setter", 25.0, 32.0, 12.0),
    ("Irish Setter", 27.0, 32.0, 12.0),
    ("Irish Terrier", 11.0, 12.0, 13.5),
    ("Irish Water Spaniel", 25.0, 30.0, 11.5),
    ("Irish Wolfhound", 54.0, 70.0, 7.0),
    ("Italian Greyhound", 3.6, 8.2, 14.0),
    ("Jack Russell Terrier", 6.0, 8.0, 14.0),
    ("Japanese Chin", 3.0, 5.0, 13.0),
    ("Keeshond", 16.0, 20.0, 13.0),
    ("Kerry Blue Terrier", 15.0, 18.0, 12.5),
    ("Komondor", 50.0, 60.0, 10.5),
    ("Kuvasz", 45.0, 52.0, 10.0),
    ("Labrador Retriever", 29.0, 36.0, 11.5),
    ("Lagotto Romagnolo", 13.0, 16.0, 14.0),
    ("Lakeland Terrier", 7.0, 8.0, 13.5),
    ("Leonberger", 48.0, 75.0, 8.0),
    ("Lhasa Apso", 5.0, 8.0, 13.5),
    ("Maltese", 3.0, 4.0, 13.5),
    ("Manchester Terrier", 5.0, 10.0, 14.0),
    ("Mastiff", 72.0, 104.0, 7.5),
    ("Miniature Bull Terrier", 9.0, 15.0, 12.5),
    ("Miniature Pinscher", 3.6, 5.0, 14.0),
    ("Miniature Schnauzer", 5.4, 9.1, 13.5),
    ("Neapolitan Mastiff", 60.0, 70.0, 8.0),
    ("Newfoundland", 60.0, 70.0, 9.0),
    ("Norfolk Terrier", 5.0, 5.4, 13.5),
    ("Norwegian Buhund", 14.0, 18.0, 13.0),
    ("Norwegian Elkhound", 23.0, 25.0, 13.0),
    ("Norwich Terrier", 5.0, 5.4, 13.5),
    ("Nova Scotia Duck Tolling Retriever", 17.0, 23.0, 13.0),
    ("Old English Sheepdog", 32.0, 45.0, 11.0),
    ("Otterhound", 36.0, 52.0, 11.0),
    ("Papillon", 3.6, 4.5, 14.0),
    ("Parson Russell Terrier", 6.0, 8.0, 14.0),
    ("Pekingese", 3.5, 6.0, 13.0),
    ("Pembroke Welsh Corgi", 10.0, 14.0, 13.0),
    ("Petit Basset Griffon Vendeen", 15.0, 20.0, 13.0),
    ("Pharaoh Hound", 20.0, 25.0, 12.5),
    ("Pointer", 25.0, 34.0, 12.5),
    ("Polish Lowland Sheepdog", 18.0, 23.0, 12.5),
    ("Pomeranian", 1.9, 3.5, 14.0),
    ("Poodle", 20.0, 32.0, 13.0),
    ("Portuguese Water Dog", 19.0, 27.0, 12.5),
    ("Pug", 6.3, 8.1, 12.5),
    ("Puli", 10.0, 15.0, 13.5),
    ("Rat Terrier", 4.5, 11.0, 14.5),
    ("Rhodesian Ridgeback", 36.0, 41.0, 11.0),
    ("Rottweiler", 45.0, 60.0, 9.5),
    ("Saint Bernard", 64.0, 82.0, 8.5),
    ("Saluki", 20.0, 27.0, 13.0),
    ("Samoyed", 20.0, 30.0, 13.0),
    ("Schipperke", 4.5, 7.3, 14.0),
    ("Scottish Deerhound", 39.0, 50.0, 9.0),
    ("Scottish Terrier", 8.6, 10.0, 12.5),
    ("Shetland Sheepdog", 6.4, 12.3, 13.0),
    ("Shiba Inu", 8.0, 11.0, 14.0),
    ("Shih Tzu", 4.0, 7.2, 13.5),
    ("Siberian Husky", 20.0, 27.0, 12.5),
    ("Vizsla", 20.0, 29.0, 13.0),
    ("Weimaraner", 32.0, 37.0, 11.5),
    ("Whippet", 11.0, 18.0, 13.5),
]


def build_breeds() -> list[dict]:
    records = []
    for name, wmin, wmax, life in BREEDS:
        records.append(
            {
                "breed": name,
                "male": {"life_expectancy": life, "w_min": wmin, "w_max": wmax},
                "female": {
                    "life_expectancy": round(life + 0.5, 1),
                    "w_min": round(max(0.5, wmin * 0.85), 1),
                    "w_max": round(wmax * 0.9, 1),
                },
            }
        )
    assert len(records) == 149, len(records)
    assert len({r["breed"] for r in records}) == 149
    return records


# ---------------------------------------------------------------------------
# Few-shot example documentations (grades 1-4; 9, 17, 30 and 51 findings).
# ---------------------------------------------------------------------------

FEW_SHOT_META = [
    {"breed": "Jack Russell Terrier", "age": 4, "sex": "female", "weight": 6.8},
    {"breed": "Pomeranian", "age": 6, "sex": "male", "weight": 3.1},
    {"breed": "Labrador Retriever", "age": 7, "sex": "male", "weight": 31.0},
    {"breed": "French Bulldog", "age": 9, "sex": "female", "weight": 11.2},
]

FEW_SHOT_COUNTS = [9, 17, 30, 51]
FEW_SHOT_LOCATIONS = ["left", "right", "left", "bilateral"]
SOFT_CONDS = [1, 2, 4, 5]  # pain, tension, swelling, warmth


def build_few_shot(atlas: dict) -> list[dict]:
    regions = atlas["regions"]
    by_label = {r["label"]: r["index"] for r in regions}

    def pool(side):
        return [r["index"] for r in regions if PST in r["tags"] and r["side"] == side]

    docs = []
    for grade, (count, location, meta) in enumerate(
        zip(FEW_SHOT_COUNTS, FEW_SHOT_LOCATIONS, FEW_SHOT_META), start=1
    ):
        sides = ["left", "right"] if location == "bilateral" else [location]
        abnormalities = []
        knee_cond = 3 if grade <= 2 else 7  # acute early, chronic late
        for side in sides:
            abnormalities.append((by_label[f"{side} knee joint"], knee_cond))
        if grade >= 3:
            for side in sides:
                abnormalities.append((by_label[f"{side} hip joint"], 7))
        taken = {r for r, _ in abnormalities}
        filler = [i for side in sides for i in pool(side) if i not in taken]
        # grade 3 needs more entries than one side's soft-tissue pool holds
        extra = [
            r["index"]
            for r in regions
            if r["index"] not in taken and r["side"] in sides + ["midline"]
        ]
        filler += [i for i in extra if i not in filler]
        k = 0
        while len(abnormalities) < count:
            abnormalities.append((filler[k], SOFT_CONDS[k % len(SOFT_CONDS)]))
            k += 1
        docs.append(
            {
                "id": f"fewshot-grade{grade}",
                "metadata": meta,
                "diagnosis": {"name": "patellar luxation", "grade": grade, "location": location},
                "abnormalities": sorted(abnormalities),
                "provenance": "real",
                "seed": 0,
            }
        )
    counts = [len(d["abnormalities"]) for d in docs]
    assert counts == FEW_SHOT_COUNTS, counts
    for d in docs:
        assert len({r for r, _ in d["abnormalities"]}) == len(d["abnormalities"])
    return docs


# ---------------------------------------------------------------------------
# Diagnosis pool: 136 non-patellar labels.
# ---------------------------------------------------------------------------

BASE_DIAGNOSES = [
    "lumbosacral osteoarthritis",
    "cervical spondylomyelopathy",
    "intervertebral disc disease",
    "degenerative myelopathy",
    "cauda equina syndrome",
    "spondylosis deformans",
    "iliopsoas strain",
    "gracilis contracture",
    "infraspinatus contracture",
    "supraspinatus tendinopathy",
    "biceps tenosynovitis",
    "carpal hyperextension injury",
    "achilles tendon rupture",
    "gastrocnemius myopathy",
    "fibrotic myopathy of the hamstrings",
    "panosteitis",
    "hypertrophic osteodystrophy",
    "osteochondritis dissecans of the shoulder",
    "osteochondritis dissecans of the elbow",
    "osteochondritis dissecans of the tarsus",
    "fragmented medial coronoid process",
    "ununited anconeal process",
    "legg-calve-perthes disease",
    "polyarthritis",
    "immune-mediated polyarthritis",
    "septic arthritis of the stifle",
    "lyme arthropathy",
    "masticatory muscle myositis",
    "polymyositis",
    "myasthenia gravis",
    "tick paralysis",
    "polyneuropathy",
    "brachial plexus avulsion",
    "sciatic neuropathy",
    "femoral neuropathy",
    "fibrocartilaginous embolism",
    "wobbler syndrome",
    "atlantoaxial instability",
    "sacroiliac luxation",
    "pelvic fracture malunion",
    "femoral fracture malunion",
    "tibial fracture malunion",
    "radial fracture malunion",
    "greenstick fracture of the tibia",
    "avulsion of the tibial tuberosity",
    "coxofemoral luxation",
    "traumatic elbow luxation",
    "shoulder instability",
    "medial shoulder syndrome",
    "hygroma of the elbow",
    "trochanteric bursitis",
    "calcifying tendinopathy",
    "osteosarcoma of the distal radius",
    "osteosarcoma of the proximal humerus",
    "soft tissue sarcoma of the thigh",
    "synovial cell sarcoma",
    "bone cyst of the humerus",
    "hypertrophic osteopathy",
    "carpal flexural deformity",
    "angular limb deformity",
    "patellar tendon strain",
    "quadriceps contracture",
    "sartorius strain",
    "pectineus myopathy",
    "tarsal instability",
    "plantar ligament degeneration",
    "interdigital dermatitis with lameness",
    "sesamoid disease",
    "dewclaw injury",
    "nail bed infection with lameness",
]

JOINTS = ["shoulder", "elbow", "carpal", "hip", "tarsal"]
SIDES_DX = ["left", "right"]


def build_diagnoses() -> list[str]:
    labels = list(BASE_DIAGNOSES)
    for joint in JOINTS:
        labels.append(f"{joint} osteoarthritis")
        labels.append(f"{joint} joint sprain")
    for side in SIDES_DX:
        for joint in JOINTS:
            labels.append(f"{side} {joint} dysplasia")
        labels.append(f"{side} cranial cruciate ligament rupture")
        labels.append(f"{side} meniscal tear")
        labels.append(f"{side} biceps tendon rupture")
        labels.append(f"{side} gastrocnemius strain")
        labels.append(f"{side} digital fracture")
        labels.append(f"{side} metacarpal fracture")
        labels.append(f"{side} metatarsal fracture")
        labels.append(f"{side} triceps strain")
        labels.append(f"{side} deltoid strain")
        labels.append(f"{side} carpal arthrodesis follow-up")
        labels.append(f"{side} tarsal arthrodesis follow-up")
        labels.append(f"{side} femoral head ostectomy follow-up")
        labels.append(f"{side} tibial plateau leveling osteotomy follow-up")
        labels.append(f"{side} superficial digital flexor luxation")
        labels.append(f"{side} calcaneal fracture")
        labels.append(f"{side} olecranon fracture")
        labels.append(f"{side} scapular fracture")
        labels.append(f"{side} humeral condylar fracture")
        labels.append(f"{side} stifle synovitis")
        labels.append(f"{side} tarsal collateral ligament injury")
        labels.append(f"{side} carpal collateral ligament injury")
        labels.append(f"{side} quadriceps strain")
        labels.append(f"{side} hamstring strain")
    seen = []
    for label in labels:
        if label not in seen:
            seen.append(label)
    assert len(seen) >= 136, len(seen)
    return seen[:136]


def main() -> None:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    (DATA_DIR / "fixtures").mkdir(exist_ok=True)

    atlas = build_atlas()
    (DATA_DIR / "atlas.json").write_text(json.dumps(atlas, indent=1) + "\n")
    print(f"atlas.json: {len(atlas['regions'])} regions, {len(atlas['conditions'])} conditions")

    build_template().save(DATA_DIR / "template.png", optimize=True)
    print("template.png written")

    breeds = build_breeds()
    (DATA_DIR / "breeds.json").write_text(json.dumps(breeds, indent=1) + "\n")
    print(f"breeds.json: {len(breeds)} breeds")

    few_shot = build_few_shot(atlas)
    (DATA_DIR / "few_shot.json").write_text(json.dumps(few_shot, indent=1) + "\n")
    print(f"few_shot.json: counts {[len(d['abnormalities']) for d in few_shot]}")

    diagnoses = build_diagnoses()
    (DATA_DIR / "diagnoses.txt").write_text("\n".join(diagnoses) + "\n")
    print(f"diagnoses.txt: {len(diagnoses)} labels")


if __name__ == "__main__":
    main()
