"""
CM catalogs as JSON
===================

"""
import json

from k3shim.cases import cm_catalog
from k3shim.cases.catalog import verify_catalog
from k3shim.formats import catalog_from_json, catalog_json, dumps

for N in (6, 14, 206):
    records = cm_catalog(N)
    text = dumps(catalog_json(N, records))
    back = catalog_from_json(json.loads(text))
    reports = verify_catalog(back)
    print(f"N={N}: {len(back)} records, discriminants {[int(r.disc) for r in reports]}")

print(text[:400])
