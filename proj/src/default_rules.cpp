#include "hip/default_rules.hpp"

namespace hip {

const char* kDefaultNormalizationRules = R"JSON({
  "misspellings": {
    "AGONIZNIGSERPENS": "AGONIZINGSERPENS",
    "CALISTO": "CALLISTO",
    "KIMSUKI": "KIMSUKY",
    "NEMIM": "NEMIN",
    "QUDEDAGH": "QUEDAGH",
    "REDBALDKNIGHT": "REDBALDNIGHT"
  },
  "prefixes": ["THE"],
  "suffixes": ["GROUP", "LAIR", "GANG", "APT", "CYBERESPIONAGEGROUP", "CYBERESPIONAGE", "TEAM"],
  "vendor_tokens": [
    "360", "BITDEFENDER", "CHECKPOINT", "CHKPT", "CISCO", "CROWDSTRIKE",
    "DRAGOS", "ESET", "FIREEYE", "FSECURE", "GOOGLE", "IBM", "KASPERSKY",
    "MANDIANT", "MCAFEE", "MICROSOFT", "NSA", "PALOALTO", "PROOFPOINT",
    "QIANXIN", "RECORDEDFUTURE", "SECUREWORKS", "SENTINELONE", "SYMANTEC",
    "TALOS", "TENCENT", "THALES", "TRENDMICRO", "UNIT42"
  ]
})JSON";

const char* kDefaultTaxonomyRules = R"JSON([
  {"vendor": "MITRE",          "kind": "pattern", "value": "G[0-9]{4}",                    "priority": 10},
  {"vendor": "360",            "kind": "pattern", "value": "APTC[0-9]+",                   "priority": 15},
  {"vendor": "FIREEYE",        "kind": "pattern", "value": "FIN[0-9]+",                    "priority": 20},
  {"vendor": "MANDIANT",       "kind": "pattern", "value": "APT[0-9]+|UNC[0-9]+|TEMP\\.[A-Z0-9.]+", "priority": 25},
  {"vendor": "CERTUA",         "kind": "pattern", "value": "UAC[0-9]+",                    "priority": 30},
  {"vendor": "TALOS",          "kind": "pattern", "value": "UAT[0-9]+",                    "priority": 35},
  {"vendor": "RECORDEDFUTURE", "kind": "pattern", "value": "TAG[0-9]+",                    "priority": 40},
  {"vendor": "THALES",         "kind": "pattern", "value": "ATK[0-9]+",                    "priority": 45},
  {"vendor": "TENCENT",        "kind": "pattern", "value": "TAPT[0-9]+",                   "priority": 50},
  {"vendor": "SECUREWORKS",    "kind": "pattern", "value": "(BRONZE|GOLD|IRON|NICKEL|COBALT|TIN)[A-Z]+", "priority": 55},
  {"vendor": "CROWDSTRIKE",    "kind": "pattern", "value": "[A-Z0-9]+(PANDA|BEAR|KITTEN|CHOLLIMA|SPIDER|JACKAL|TIGER|LEOPARD|BUFFALO|CRANE|OCELOT|WOLF|SPHINX|HAWK)", "priority": 60},
  {"vendor": "MICROSOFT",      "kind": "pattern", "value": "STORM[0-9]+|DEV[0-9]+",        "priority": 65},
  {"vendor": "MICROSOFT",      "kind": "pattern", "value": "[A-Z0-9]+(TYPHOON|BLIZZARD|SLEET|SANDSTORM|RAIN|TEMPEST|FLOOD|DUST|CUCKOO)", "priority": 70},
  {"vendor": "PALOALTOUNIT42", "kind": "pattern", "value": "[A-Z0-9]+(PISCES|TAURUS|URSA|LIBRA|SERPENS|DRACO|GEMINI|SAGITTARIUS|SCORPIUS|VIRGO|CETUS|CARINA|ORION|PHOENIX)", "priority": 75},
  {"vendor": "MICROSOFTOLD",   "kind": "list", "value": [
      "ACTINIUM", "BARIUM", "BISMUTH", "BOHRIUM", "BROMINE", "CADMIUM",
      "CERIUM", "CESIUM", "CHROMIUM", "COPERNICIUM", "DUBNIUM", "EUROPIUM",
      "GADOLINIUM", "GALLIUM", "GERMANIUM", "HAFNIUM", "HOLMIUM", "IRIDIUM",
      "KRYPTON", "LAWRENCIUM", "LITHIUM", "MANGANESE", "MERCURY",
      "NEODYMIUM", "NEON", "NICKEL", "NOBELIUM", "OSMIUM", "PHOSPHORUS",
      "PLATINUM", "PLUTONIUM", "POLONIUM", "RADIUM", "RUBIDIUM",
      "SEABORGIUM", "SILICON", "STRONTIUM", "TANTALUM", "TELLURIUM",
      "THALLIUM", "THORIUM", "ZINC", "ZIRCONIUM"
    ], "priority": 80},
  {"vendor": "KASPERSKY",      "kind": "list", "value": [
      "BLUENOROFF", "CARBANAK", "CROUCHINGYETI", "DARKTEQUILA",
      "DARKUNIVERSE", "EQUATION", "GOLDENJACKAL", "TAJMAHAL"
    ], "priority": 85},
  {"vendor": "SYMANTEC",       "kind": "list", "value": [
      "BUTTERFLY", "CRAMBUS", "DRAGONFLY", "ELDERWOOD", "ELFIN",
      "GALLMAKER", "GREENBUG", "HIDDENLYNX", "LEAFMINER", "SEEDWORM",
      "SOWBUG", "THRIP", "WHITEFLY"
    ], "priority": 90},
  {"vendor": "NSA",            "kind": "list", "value": [], "priority": 95}
])JSON";

const char* kDefaultOverrides = R"JSON({
  "GOLDENJACKAL": "KASPERSKY"
})JSON";

}  // namespace hip
