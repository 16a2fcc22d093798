"""Build systematic names for a few materials and print the reference forms.

Run: python demos/naming.py
"""

from nmmkit.snnmm import construct_nmmsn, format_reference, format_reference_zh, nmm_id_decode

REQUESTS = {
    "NMM-0001": ("Qing-hao", "青蒿", {
        "nmm_type": "agricultural",
        "species_origins": [["Artemisia annua", "黄花蒿"]],
        "medicinal_parts": [["part aerial", "地上部"]],
        "special_descriptions": [],
        "processing_methods": [],
    }),
    "NMM-0006": ("Ma-huang", "麻黄", {
        "nmm_type": "agricultural",
        "species_origins": [["Ephedra sinica", "草麻黄"], "or", ["Ephedra intermedia", "中麻黄"], "or", ["Ephedra equisetina", "木贼麻黄"]],
        "medicinal_parts": [["stem herbaceous", "草质茎"]],
        "special_descriptions": [],
        "processing_methods": [],
    }),
}


def main():
    for nmm_id, (gn, gn_zh, request) in REQUESTS.items():
        result = construct_nmmsn(request)
        print(f"{nmm_id} (serial {nmm_id_decode(nmm_id)})")
        if result.status.error_msg:
            print("  note:", result.status.error_msg)
        print("  ", format_reference(result.nmmsn.nmmsn, nmm_id, gn))
        print("  ", format_reference_zh(result.nmmsn.zh, nmm_id, gn_zh))
        print("   pinyin:", result.nmmsn.pinyin)

    # the inclusion rule rejects a variety listed next to its own species
    bad = construct_nmmsn({
        "nmm_type": "agricultural",
        "species_origins": [["Crataegus pinnatifida", "山楂"], "or", ["Crataegus pinnatifida var major", "山里红"]],
        "medicinal_parts": [["fruit", "果实"]],
        "special_descriptions": [],
        "processing_methods": [],
    })
    print("rejected:", bad.status.error_msg)


if __name__ == "__main__":
    main()
