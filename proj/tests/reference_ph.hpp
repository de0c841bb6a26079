#pragma once

#include <string>
#include <vector>

// Reference coefficients p_1..p_{h-1} of P_h(L) = sum_j p_j L^j, h = 2..15.
inline const std::vector<std::vector<std::string>>& reference_ph_coefficients() {
  static const std::vector<std::vector<std::string>> table = {
      {"2"},
      {"-3", "3"},
      {"14/3", "-4", "16/3"},
      {"-15/2", "65/12", "-15/2", "115/12"},
      {"62/5", "-15/2", "11", "-27/2", "88/5"},
      {"-21", "959/90", "-203/12", "707/36", "-301/12", "5887/180"},
      {"254/7", "-140/9", "1226/45", "-266/9", "334/9", "-422/9", "19328/315"},
      {"-255/4", "2613/112", "-731/16", "14701/320", "-457/8", "2233/32", "-1415/16", "259723/2240"},
      {"1022/9", "-2585/72", "359105/4536", "-7055/96", "9869/108", "-1725/16", "28625/216", "-48325/288", "124952/567"},
      {"-1023/5", "16973/300", "-60775/432", "5463953/45360", "-435941/2880", "7449761/43200", "-19811/96", "1091629/4320", "-2764663/8640", "381773117/907200"},
      {"4094/11", "-2277/25", "687791/2700", "-72523/360", "3907067/15120", "-341143/1200", "599327/1800", "-7909/20", "1045349/2160", "-2205833/3600", "41931328/51975"},
      {"-1365/2", "591721/3960", "-2020421/4320", "44385419/129600", "-7815847/17280", "116257063/241920", "-3192163/5760", "110721221/172800", "-13148473/17280", "19285357/20736", "-20345507/17280", "20646903199/13305600"},
      {"16382/13", "-44863/180", "34353347/39600", "-38237381/64800", "1292711/1600", "-42972293/51840", "122732801/129600", "-92420419/86400", "53508931/43200", "-76095383/51840", "77441609/43200", "-588168119/259200", "866732192/289575"},
      {"-16383/7", "1074679/2548", "-583763/360", "113982839/110880", "-12673507/8640", "58584511/40320", "-400088153/241920", "1033251187/564480", "-23927713/11520", "193398181/80640", "-98109773/34560", "279340567/80640", "-1060693411/241920", "467168310097/80720640"},
  };
  return table;
}
