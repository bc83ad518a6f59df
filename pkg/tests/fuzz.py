"""Single-field mutations of a parsed certificate document."""


def fields(doc):
    """Every mutable location as (container path, key, kind)."""
    out = [((), "format_version", "int"), ((), "root", "str")]
    out += [(("params",), x, "int") for x in ("m", "k", "s")]
    for key, node in doc["nodes"].items():
        out.append((("nodes",), key, "rename"))
        out.append((("nodes",), key, "delete"))
        if "terminal" in node:
            out.append((("nodes", key), "terminal", "str"))
            continue
        for item, d in node["branches"].items():
            base = ("nodes", key, "branches")
            out.append((base, item, "rename"))
            out.append((base, item, "delete"))
            if "bin" in d:
                out.append((base + (item,), "bin", "int"))
                out.append((base + (item,), "child", "str"))
            else:
                out.append((base + (item,), "cheat", "delete-entry"))
                for i in range(len(d["cheat"])):
                    out.append((base + (item, "cheat"), i, "int"))
    return out


def _perturb_text(text, rng):
    digits = [i for i, ch in enumerate(text) if ch.isdigit()]
    if digits and rng.random() < 0.8:
        i = rng.choice(digits)
        new = rng.choice([d for d in "0123456789" if d != text[i]])
        return text[:i] + new + text[i + 1:]
    choices = ["VolumeExceeded", "EmptiestBin", "NoItems", "L=[0,0];H=[]", "", "x"]
    return rng.choice([c for c in choices if c != text])


def mutate(doc, rng, locations=None):
    """Return a copy of ``doc`` with exactly one field changed.

    Only containers on the mutated path are copied; the rest is shared.
    """
    locations = locations or fields(doc)
    while True:
        path, key, kind = rng.choice(locations)
        out = dict(doc)
        parent = out
        for p in path:
            child = parent[p]
            child = list(child) if isinstance(child, list) else dict(child)
            parent[p] = child
            parent = child
        if kind == "int":
            parent[key] = parent[key] + rng.choice([-2, -1, 1, 2, 5])
        elif kind == "str":
            parent[key] = _perturb_text(parent[key], rng)
        elif kind == "rename":
            value = parent.pop(key)
            parent[_perturb_text(key, rng)] = value
        elif kind == "delete":
            del parent[key]
        else:
            entries = list(parent[key])
            if not entries:
                continue
            entries.pop(rng.randrange(len(entries)))
            parent[key] = entries
        return out
