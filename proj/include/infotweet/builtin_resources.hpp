#pragma once

// Bundled default normalization tables. The files under resources/ mirror
// these; `infotweet normalize` falls back to them when no resource directory
// is given.

#include "infotweet/normalize.hpp"

namespace infotweet {

inline NormalizationResources NormalizationResources::builtin() {
  NormalizationResources res;
  res.contraction_map = {
      {"ain't", "is not"},       {"aren't", "are not"},     {"can't", "cannot"},
      {"could've", "could have"},{"couldn't", "could not"}, {"didn't", "did not"},
      {"doesn't", "does not"},   {"don't", "do not"},       {"hadn't", "had not"},
      {"hasn't", "has not"},     {"haven't", "have not"},   {"he'd", "he would"},
      {"he'll", "he will"},      {"he's", "he is"},         {"here's", "here is"},
      {"how's", "how is"},       {"i'd", "i would"},        {"i'll", "i will"},
      {"i'm", "i am"},           {"i've", "i have"},        {"isn't", "is not"},
      {"it'd", "it would"},      {"it'll", "it will"},      {"it's", "it is"},
      {"let's", "let us"},       {"might've", "might have"},{"mustn't", "must not"},
      {"she'd", "she would"},    {"she'll", "she will"},    {"she's", "she is"},
      {"should've", "should have"}, {"shouldn't", "should not"}, {"that'll", "that will"},
      {"that's", "that is"},     {"there'll", "there will"},{"there's", "there is"},
      {"they'd", "they would"},  {"they'll", "they will"},  {"they're", "they are"},
      {"they've", "they have"},  {"wasn't", "was not"},     {"we'd", "we would"},
      {"we'll", "we will"},      {"we're", "we are"},       {"we've", "we have"},
      {"weren't", "were not"},   {"what's", "what is"},     {"when's", "when is"},
      {"where's", "where is"},   {"who'll", "who will"},    {"who's", "who is"},
      {"won't", "will not"},     {"would've", "would have"},{"wouldn't", "would not"},
      {"y'all", "you all"},      {"you'd", "you would"},    {"you'll", "you will"},
      {"you're", "you are"},     {"you've", "you have"},
  };
  res.leet_map = {
      {"1337", "leet"},      {"l33t", "leet"},     {"w00t", "woot"},
      {"n00b", "noob"},      {"pwn3d", "pwned"},   {"h4x0r", "hacker"},
      {"gr8", "great"},      {"l8r", "later"},     {"m8", "mate"},
      {"w8", "wait"},        {"b4", "before"},     {"2day", "today"},
      {"2morrow", "tomorrow"}, {"2nite", "tonight"}, {"4ever", "forever"},
      {"sum1", "someone"},   {"ne1", "anyone"},    {"every1", "everyone"},
      {"no1", "no one"},
  };
  // Keys are UTF-8 codepoint sequences (variation selectors are already
  // stripped by the compatibility fold). Names stay [a-z0-9]+ so emoji tokens
  // are fixed points of the pipeline.
  const std::pair<const char*, const char*> emoji[] = {
      {"\U0001F600", ":grinning:"},    {"\U0001F602", ":joy:"},
      {"\U0001F603", ":smiley:"},      {"\U0001F604", ":smile:"},
      {"\U0001F605", ":sweatsmile:"},  {"\U0001F609", ":wink:"},
      {"\U0001F60A", ":blush:"},       {"\U0001F60D", ":hearteyes:"},
      {"\U0001F614", ":pensive:"},     {"\U0001F615", ":confused:"},
      {"\U0001F622", ":cry:"},         {"\U0001F62D", ":sob:"},
      {"\U0001F620", ":angry:"},       {"\U0001F621", ":rage:"},
      {"\U0001F628", ":fearful:"},     {"\U0001F631", ":scream:"},
      {"\U0001F637", ":maskface:"},    {"\U0001F912", ":sickface:"},
      {"\U0001F644", ":eyeroll:"},     {"\U0001F64F", ":pray:"},
      {"\U0001F44D", ":thumbsup:"},    {"\U0001F44E", ":thumbsdown:"},
      {"\U0001F44F", ":clap:"},        {"\U0001F4AA", ":muscle:"},
      {"❤", ":redheart:"},        {"\U0001F494", ":brokenheart:"},
      {"\U0001F525", ":fire:"},        {"\U0001F4A5", ":boom:"},
      {"⚠", ":warning:"},         {"✅", ":checkmark:"},
      {"❌", ":crossmark:"},       {"\U0001F3E5", ":hospital:"},
      {"\U0001F489", ":syringe:"},     {"\U0001F48A", ":pill:"},
      {"\U0001F9A0", ":microbe:"},     {"\U0001F30D", ":globe:"},
      {"\U0001F4F0", ":newspaper:"},   {"\U0001F6A8", ":siren:"},
      {"\U0001F4E2", ":loudspeaker:"}, {"\U0001F914", ":thinking:"},
      {"\U0001F923", ":rofl:"},        {"\U0001F97A", ":pleading:"},
  };
  for (const auto& [seq, name] : emoji) res.emoji_map[seq] = name;
  const char* places[] = {
      "wuhan", "china", "italy", "spain", "france", "germany", "iran", "india",
      "pakistan", "brazil", "mexico", "canada", "japan", "russia", "nigeria",
      "kenya", "australia", "sweden", "norway", "ireland", "scotland", "england",
      "london", "paris", "madrid", "rome", "milan", "berlin", "moscow", "beijing",
      "shanghai", "tokyo", "seoul", "delhi", "mumbai", "chennai", "kolkata",
      "karachi", "lahore", "toronto", "vancouver", "seattle", "chicago", "boston",
      "houston", "dallas", "miami", "atlanta", "detroit", "philadelphia", "denver",
      "phoenix", "lagos", "nairobi", "abuja", "maitama", "rohini", "texas",
      "california", "florida", "ohio", "georgia", "washington", "oregon",
      "arizona", "michigan", "wisconsin", "louisiana", "alabama", "colorado",
      "utah", "iowa", "kansas", "idaho", "maine", "montana", "nevada", "vermont",
      "virginia", "kerala", "punjab", "gujarat", "maharashtra",
      "new york", "new jersey", "new delhi", "new orleans", "los angeles",
      "san francisco", "san diego", "las vegas", "hong kong", "sri lanka",
      "south korea", "north korea", "south africa", "saudi arabia",
      "united states", "united kingdom", "new zealand", "santa clara",
  };
  for (const char* p : places) res.gazetteer.insert(p);
  return res;
}

}  // namespace infotweet
