"""Regenerate the shipped sample datasets under src/treeplan/data/.

Run from the repository root: ``python3 scripts/build_datasets.py``.
The output is deterministic; the JSON files are committed.
"""

from __future__ import annotations

from pathlib import Path

from treeplan.bench.dataset import parse_dataset, save_dataset

DATA = Path(__file__).resolve().parents[1] / "src" / "treeplan" / "data"


def tool(name, description, *params):
    """params: "name", "name:number", or "name?" for optional."""
    out = []
    for p in params:
        required = not p.endswith("?")
        p = p.rstrip("?")
        pname, _, ptype = p.partition(":")
        out.append({"name": pname, "type": ptype or "string", "required": required})
    return {"name": name, "description": description, "params": out}


def step(tool_name, output=None, **args):
    s = {"tool": tool_name, "args": args}
    if output is not None:
        s["output"] = output
    return s


def chain(n):
    return [[i, i + 1] for i in range(n - 1)]


def task(task_id, instruction, plan, edges=(), tools=None):
    t = {"id": task_id, "instruction": instruction, "gold_plan": plan, "gold_edges": [list(e) for e in edges]}
    if tools is not None:
        t["tools"] = tools
    return t


# ---------------------------------------------------------------------------
# daily-life APIs

DAILY_TOOLS = [
    tool("online_banking", "Carry out a banking operation described in natural language at the named bank.", "instruction", "bank"),
    tool("organize_meeting_online", "Used to organize an online meeting on a topic.", "topic"),
    tool("attend_meeting_online", "Used to attend an online meeting on a topic.", "topic"),
    tool("recording_audio", "Record audio and save it under the given file name.", "content"),
    tool("enroll_in_course", "Enroll in a course at a university.", "course", "university"),
    tool("take_note", "Save a short text note.", "content"),
    tool("play_movie_by_title", "Play a movie file by its title.", "title"),
    tool("book_car", "Book a rental car for a date and location.", "date", "location"),
    tool("deliver_package", "Ship a package to a destination address.", "package", "destination"),
    tool("set_alarm", "Set an alarm for a time of day.", "time"),
    tool("see_doctor_online", "Book an online consultation with a doctor about a condition.", "disease", "doctor"),
    tool("borrow_book_online", "Borrow a book from a library online.", "book", "library"),
    tool("book_hotel", "Reserve a hotel room by hotel name and date.", "date", "name"),
    tool("pay_for_credit_card", "Pay the bill of a credit card identified by its last digits.", "credit_card"),
    tool("make_voice_call", "Place a voice call to a phone number.", "phone_number"),
    tool("sell_item_online", "List an item for sale in an online store.", "item", "store"),
    tool("book_flight", "Book a flight between two cities on a date.", "from", "to", "date"),
    tool("get_news_for_topic", "Fetch the latest news articles about a topic.", "topic"),
    tool("search_by_engine", "Run a generic web search.", "query"),
    tool("send_email", "Send an email message.", "to", "subject", "content"),
    tool("online_shopping", "Buy an item on a shopping platform.", "item", "platform"),
    tool("software_management", "Install or uninstall a piece of software.", "software", "action"),
    tool("play_music", "Play a music file by title.", "title"),
    tool("get_weather", "Get the weather forecast for a location and date.", "location", "date"),
    tool("send_sms", "Send a text message to a phone number.", "phone_number", "message"),
    tool("apply_for_job", "Submit a job application to a company.", "job", "company"),
    tool("buy_insurance", "Buy an insurance plan from a company.", "insurance", "company"),
    tool("online_translation", "Translate text into a target language.", "text", "target_language"),
]

DAILY_TASKS = [
    task("dl-001", "I need to repay a debt of $1000 to my friend. Can you assist me in transferring this amount to their account at Chase bank?",
         [step("online_banking", instruction="transfer $1000 to friend's account", bank="Chase bank")]),
    task("dl-002", "I have an upcoming online meeting with Dr. John Smith to discuss 'Migraine Treatment'. Please organize this meeting and record the audio of our conversation as 'example.wav'.",
         [step("organize_meeting_online", topic="Migraine Treatment"), step("recording_audio", content="example.wav")], [[0, 1]]),
    task("dl-003", "Set an alarm for 6:30 AM tomorrow.", [step("set_alarm", time="6:30 AM")]),
    task("dl-004", "What will the weather be like in Seattle on 2023-05-02?", [step("get_weather", location="Seattle", date="2023-05-02")]),
    task("dl-005", "I want to sell my handmade necklace on Etsy. I also need to book a flight from Chicago to Los Angeles for March 3, 2023, and call my friend at +1234567890 to tell her about my plans.",
         [step("sell_item_online", item="Handmade Necklace", store="Etsy"),
          step("book_flight", **{"from": "Chicago", "to": "Los Angeles", "date": "March 3, 2023"}),
          step("make_voice_call", phone_number="+1234567890")]),
    task("dl-006", "I have just enrolled in the 'Introduction to Machine Learning' course at Berkeley University and want a note of it. Then play 'example.mp4', book a car for August 15th in San Francisco, deliver the package 'example.jpg' to 123 Main St, San Francisco, CA 94103, and set an alarm for 7:00 AM.",
         [step("enroll_in_course", course="Introduction to Machine Learning", university="Berkeley University"),
          step("take_note", content="Enrolled in Introduction to Machine Learning at Berkeley University"),
          step("play_movie_by_title", title="example.mp4"),
          step("book_car", date="August 15th", location="San Francisco"),
          step("deliver_package", package="example.jpg", destination="123 Main St, San Francisco, CA 94103"),
          step("set_alarm", time="7:00 AM")], [[0, 1]]),
    task("dl-007", "Book a room at the Ritz for 2022-10-15, organize an online meeting about marketing strategy, pay my credit card ending in 1234, see Dr. House online about a skin condition, and borrow 'Marketing for Dummies' from the City Library.",
         [step("book_hotel", date="2022-10-15", name="Ritz"),
          step("organize_meeting_online", topic="marketing strategy"),
          step("pay_for_credit_card", credit_card="1234"),
          step("see_doctor_online", disease="skin condition", doctor="Dr. House"),
          step("borrow_book_online", book="Marketing for Dummies", library="City Library")]),
    task("dl-008", "Please install MoviePlayer and then play the movie 'movie.mp4'.",
         [step("software_management", software="MoviePlayer", action="install"), step("play_movie_by_title", title="movie.mp4")], [[0, 1]]),
    task("dl-009", "Find the latest news about online shopping deals and email it to john.doe@example.com with the subject 'Shopping deals'.",
         [step("get_news_for_topic", "shopping_deals_digest", topic="online shopping deals"),
          step("send_email", to="john.doe@example.com", subject="Shopping deals", content="shopping_deals_digest")], [[0, 1]]),
    task("dl-010", "Buy wireless headphones on Amazon.", [step("online_shopping", item="wireless headphones", platform="Amazon")]),
    task("dl-011", "Text +15550001111 the message 'Running late, start without me'.",
         [step("send_sms", phone_number="+15550001111", message="Running late, start without me")]),
    task("dl-012", "Translate 'Where is the train station?' into Spanish and text the translation to my friend at +15552223333.",
         [step("online_translation", "translated_text_es", text="Where is the train station?", target_language="Spanish"),
          step("send_sms", phone_number="+15552223333", message="translated_text_es")], [[0, 1]]),
    task("dl-013", "Apply for the Data Analyst job at Acme Corp, then email hr@acme.com with subject 'Application sent' and the content 'I have applied for the Data Analyst role'.",
         [step("apply_for_job", job="Data Analyst", company="Acme Corp"),
          step("send_email", to="hr@acme.com", subject="Application sent", content="I have applied for the Data Analyst role")], [[0, 1]]),
    task("dl-014", "Buy travel insurance from SafeTrip, book a flight from Boston to Denver on 2023-07-04, book the Hilton for 2023-07-04, and rent a car in Denver for 2023-07-04.",
         [step("buy_insurance", insurance="travel insurance", company="SafeTrip"),
          step("book_flight", **{"from": "Boston", "to": "Denver", "date": "2023-07-04"}),
          step("book_hotel", date="2023-07-04", name="Hilton"),
          step("book_car", date="2023-07-04", location="Denver")], [[1, 2], [1, 3]]),
    task("dl-015", "Play the song 'example.wav'.", [step("play_music", title="example.wav")]),
    task("dl-016", "Search the web for 'best hiking trails near Denver', save the results as a note, and then email the note to sam@example.com with subject 'Hikes'.",
         [step("search_by_engine", "hiking_search_results", query="best hiking trails near Denver"),
          step("take_note", "note_hiking_trails", content="hiking_search_results"),
          step("send_email", to="sam@example.com", subject="Hikes", content="note_hiking_trails")], chain(3)),
    task("dl-017", "Attend the online meeting about the quarterly budget review.", [step("attend_meeting_online", topic="quarterly budget review")]),
    task("dl-018", "Check the weather in Paris on 2023-09-10, book a flight from London to Paris on 2023-09-10, reserve Le Bristol for 2023-09-10, set an alarm for 5:00 AM, and text +447700900000 saying 'Off to Paris'.",
         [step("get_weather", location="Paris", date="2023-09-10"),
          step("book_flight", **{"from": "London", "to": "Paris", "date": "2023-09-10"}),
          step("book_hotel", date="2023-09-10", name="Le Bristol"),
          step("set_alarm", time="5:00 AM"),
          step("send_sms", phone_number="+447700900000", message="Off to Paris")], [[1, 2]]),
    task("dl-019", "Pay my credit card ending in 9876 through Wells Fargo by transferring $250 from checking, then take a note that the card is paid.",
         [step("online_banking", instruction="transfer $250 from checking to credit card", bank="Wells Fargo"),
          step("pay_for_credit_card", credit_card="9876"),
          step("take_note", content="credit card 9876 paid")], chain(3)),
    task("dl-020", "Organize an online meeting about 'Product Launch', record it as 'launch.wav', take a note saying 'launch meeting recorded', email team@example.com with subject 'Launch recording' and content 'launch.wav', text +15559998888 'Recording sent', set an alarm for 9:00 AM, uninstall OldChat, and play the song 'celebrate.mp3'.",
         [step("organize_meeting_online", topic="Product Launch"),
          step("recording_audio", content="launch.wav"),
          step("take_note", content="launch meeting recorded"),
          step("send_email", to="team@example.com", subject="Launch recording", content="launch.wav"),
          step("send_sms", phone_number="+15559998888", message="Recording sent"),
          step("set_alarm", time="9:00 AM"),
          step("software_management", software="OldChat", action="uninstall"),
          step("play_music", title="celebrate.mp3")], [[0, 1], [1, 3]]),
    task("dl-021", "See Dr. Patel online about seasonal allergies.", [step("see_doctor_online", disease="seasonal allergies", doctor="Dr. Patel")]),
    task("dl-022", "Borrow 'Dune' from the Central Library and sell my old guitar on eBay.",
         [step("borrow_book_online", book="Dune", library="Central Library"), step("sell_item_online", item="old guitar", store="eBay")]),
    task("dl-023", "Get the latest news about electric vehicles, translate it into German, and email the translation to klaus@example.de with subject 'EV news'.",
         [step("get_news_for_topic", "ev_news_digest", topic="electric vehicles"),
          step("online_translation", "ev_news_de", text="ev_news_digest", target_language="German"),
          step("send_email", to="klaus@example.de", subject="EV news", content="ev_news_de")], chain(3)),
    task("dl-024", "Install Zoom, organize an online meeting about 'Sprint Planning', record it as 'sprint.wav', take a note 'sprint planned', set an alarm for 8:45 AM, text +15551234567 'Sprint meeting booked', and email lead@example.com with subject 'Sprint' and content 'Sprint meeting booked'.",
         [step("software_management", software="Zoom", action="install"),
          step("organize_meeting_online", topic="Sprint Planning"),
          step("recording_audio", content="sprint.wav"),
          step("take_note", content="sprint planned"),
          step("set_alarm", time="8:45 AM"),
          step("send_sms", phone_number="+15551234567", message="Sprint meeting booked"),
          step("send_email", to="lead@example.com", subject="Sprint", content="Sprint meeting booked")], [[0, 1], [1, 2]]),
]

# ---------------------------------------------------------------------------
# ML model pipelines

ML_TOOLS = [
    tool("Text-to-Speech", "Convert text to spoken audio and return the audio file.", "text"),
    tool("Audio-to-Audio", "Enhance or transform an audio file and return the new file.", "audio_path"),
    tool("Automatic Speech Recognition", "Transcribe speech in an audio file to text.", "audio_path"),
    tool("Audio Classification", "Classify the sounds in an audio file.", "audio_path"),
    tool("Translation", "Translate text into a target language.", "text", "target_language"),
    tool("Summarization", "Summarize a piece of text.", "text"),
    tool("Text Classification", "Assign a label such as sentiment to text.", "text"),
    tool("Token Classification", "Tag named entities in text.", "text"),
    tool("Question Answering", "Answer a question given a context passage.", "context", "question"),
    tool("Document Question Answering", "Answer a question about a scanned document image.", "document_path", "question"),
    tool("Text Generation", "Continue or generate text from a prompt.", "prompt"),
    tool("Text-to-Image Generation", "Generate an image from a text description.", "text"),
    tool("Object Detection", "Detect objects in an image.", "image_path"),
    tool("Image Segmentation", "Split an image into labelled segments.", "image_path"),
    tool("Image Classification", "Classify the content of an image.", "image_path"),
    tool("Image Editing", "Apply edits to an image and return the edited file.", "image_path", "edits:object"),
    tool("Image-to-Text", "Caption an image.", "image_path"),
    tool("Visual Question Answering", "Answer a question about an image.", "image_path", "question"),
    tool("Depth Estimation", "Estimate a depth map for an image.", "image_path"),
    tool("Tabular Classification", "Classify a table shown in an image.", "table_image_path"),
]

ML_TASKS = [
    task("ml-001", "Detect the objects in 'street.jpg'.", [step("Object Detection", image_path="street.jpg")]),
    task("ml-002", "Convert the text in 'example.txt' to speech, enhance the audio, transcribe the enhanced speech, and translate the transcription into French.",
         [step("Text-to-Speech", "speech_example.wav", text="content_of_example.txt"),
          step("Audio-to-Audio", "enhanced_speech.wav", audio_path="speech_example.wav"),
          step("Automatic Speech Recognition", "transcript_example.txt", audio_path="enhanced_speech.wav"),
          step("Translation", text="transcript_example.txt", target_language="French")], chain(4)),
    task("ml-003", "Classify the table in the image 'table.png'.", [step("Tabular Classification", table_image_path="table.png")]),
    task("ml-004", "Identify the apples in 'fruit.jpg' and then create a new image highlighting only the Red Delicious apples.",
         [step("Object Detection", image_path="fruit.jpg"),
          step("Image Editing", image_path="fruit.jpg", edits={"highlight": ["Red Delicious"]})], [[0, 1]]),
    task("ml-005", "Segment 'room.jpg' into its parts and detect the objects in it.",
         [step("Image Segmentation", image_path="room.jpg"), step("Object Detection", image_path="room.jpg")]),
    task("ml-006", "Summarize the article in 'news.txt'.", [step("Summarization", text="content_of_news.txt")]),
    task("ml-007", "Transcribe 'meeting.wav', summarize the transcript, and classify the sentiment of the summary.",
         [step("Automatic Speech Recognition", "meeting_transcript.txt", audio_path="meeting.wav"),
          step("Summarization", "meeting_summary.txt", text="meeting_transcript.txt"),
          step("Text Classification", text="meeting_summary.txt")], chain(3)),
    task("ml-008", "What is the color of the car in 'car.jpg'?", [step("Visual Question Answering", image_path="car.jpg", question="What is the color of the car?")]),
    task("ml-009", "Generate an image of a lighthouse at sunset, caption it, and read the caption aloud.",
         [step("Text-to-Image Generation", "lighthouse.png", text="a lighthouse at sunset"),
          step("Image-to-Text", "lighthouse_caption.txt", image_path="lighthouse.png"),
          step("Text-to-Speech", text="lighthouse_caption.txt")], chain(3)),
    task("ml-010", "Estimate the depth map of 'hallway.jpg'.", [step("Depth Estimation", image_path="hallway.jpg")]),
    task("ml-011", "Enhance the noisy recording 'noisy.wav', then classify the sounds in the cleaned file.",
         [step("Audio-to-Audio", "clean.wav", audio_path="noisy.wav"), step("Audio Classification", audio_path="clean.wav")], chain(2)),
    task("ml-012", "From the scanned invoice 'invoice.png', find the total amount due, then translate that answer into German.",
         [step("Document Question Answering", "invoice_total.txt", document_path="invoice.png", question="What is the total amount due?"),
          step("Translation", text="invoice_total.txt", target_language="German")], chain(2)),
    task("ml-013", "Tag the named entities in 'bio.txt' and summarize the same text.",
         [step("Token Classification", text="content_of_bio.txt"), step("Summarization", text="content_of_bio.txt")]),
    task("ml-014", "Write a short story from the prompt 'a robot learns to paint', summarize it, translate the summary into Italian, and turn the translation into speech.",
         [step("Text Generation", "robot_story.txt", prompt="a robot learns to paint"),
          step("Summarization", "robot_summary.txt", text="robot_story.txt"),
          step("Translation", "robot_summary_it.txt", text="robot_summary.txt", target_language="Italian"),
          step("Text-to-Speech", text="robot_summary_it.txt")], chain(4)),
    task("ml-015", "Classify what 'pet.jpg' shows.", [step("Image Classification", image_path="pet.jpg")]),
    task("ml-016", "Using the passage in 'history.txt', answer 'When was the treaty signed?' and read the answer aloud.",
         [step("Question Answering", "treaty_answer.txt", context="content_of_history.txt", question="When was the treaty signed?"),
          step("Text-to-Speech", text="treaty_answer.txt")], chain(2)),
    task("ml-017", "For the lecture recording 'lecture.wav': enhance it, transcribe it, summarize the transcript, tag the entities in the summary, translate the summary into Spanish, classify its sentiment, and generate an illustration from the summary.",
         [step("Audio-to-Audio", "lecture_clean.wav", audio_path="lecture.wav"),
          step("Automatic Speech Recognition", "lecture_transcript.txt", audio_path="lecture_clean.wav"),
          step("Summarization", "lecture_summary.txt", text="lecture_transcript.txt"),
          step("Token Classification", text="lecture_summary.txt"),
          step("Translation", text="lecture_summary.txt", target_language="Spanish"),
          step("Text Classification", text="lecture_summary.txt"),
          step("Text-to-Image Generation", text="lecture_summary.txt")], [[0, 1], [1, 2], [2, 3], [2, 4], [2, 5], [2, 6]]),
    task("ml-018", "Caption the photo 'beach.jpg' and translate the caption into Japanese.",
         [step("Image-to-Text", "beach_caption.txt", image_path="beach.jpg"),
          step("Translation", text="beach_caption.txt", target_language="Japanese")], chain(2)),
    task("ml-019", "Segment 'xray.png', estimate its depth, classify it, and caption it.",
         [step("Image Segmentation", image_path="xray.png"),
          step("Depth Estimation", image_path="xray.png"),
          step("Image Classification", image_path="xray.png"),
          step("Image-to-Text", image_path="xray.png")]),
    task("ml-020", "Generate a product image from 'a red ceramic mug', detect the objects in it, remove the background from it, caption the edited image, translate the caption into Korean, read the translation aloud, enhance that audio, and classify the enhanced audio.",
         [step("Text-to-Image Generation", "mug.png", text="a red ceramic mug"),
          step("Object Detection", image_path="mug.png"),
          step("Image Editing", "mug_edited.png", image_path="mug.png", edits={"background": "remove"}),
          step("Image-to-Text", "mug_caption.txt", image_path="mug_edited.png"),
          step("Translation", "mug_caption_ko.txt", text="mug_caption.txt", target_language="Korean"),
          step("Text-to-Speech", "mug_speech.wav", text="mug_caption_ko.txt"),
          step("Audio-to-Audio", "mug_speech_clean.wav", audio_path="mug_speech.wav"),
          step("Audio Classification", audio_path="mug_speech_clean.wav")],
         [[0, 1], [0, 2], [2, 3], [3, 4], [4, 5], [5, 6], [6, 7]]),
    task("ml-021", "Classify the sentiment of the review in 'review.txt'.", [step("Text Classification", text="content_of_review.txt")]),
    task("ml-022", "Answer 'How many people are in the picture?' for 'party.jpg' after detecting the people in it.",
         [step("Object Detection", image_path="party.jpg"),
          step("Visual Question Answering", image_path="party.jpg", question="How many people are in the picture?")], [[0, 1]]),
]

# ---------------------------------------------------------------------------
# trap suite: decoy tools, pipeline dependencies, parameter traps

DAILY = {t["name"]: t for t in DAILY_TOOLS}
ML = {t["name"]: t for t in ML_TOOLS}

DECOY_TASKS = [
    task("tr-decoy-01", "Organize an online meeting about 'Budget 2024' and record it as 'budget.wav'.",
         [step("organize_meeting_online", topic="Budget 2024"), step("recording_audio", content="budget.wav")], [[0, 1]],
         tools=["organize_meeting_online", "attend_meeting_online", "recording_audio", "take_note"]),
    task("tr-decoy-02", "Find the latest news on interest rates and email it to ana@example.com with subject 'Rates'.",
         [step("get_news_for_topic", topic="interest rates"), step("send_email", to="ana@example.com", subject="Rates", content="latest interest rate news")],
         tools=["get_news_for_topic", "search_by_engine", "send_email", "send_sms"]),
    task("tr-decoy-03", "Play the movie 'holiday.mp4' and then set an alarm for 10:00 PM.",
         [step("play_movie_by_title", title="holiday.mp4"), step("set_alarm", time="10:00 PM")], [[0, 1]],
         tools=["play_movie_by_title", "play_music", "set_alarm", "take_note"]),
    task("tr-decoy-04", "Call my sister at +15553334444 and text her 'Landing at 6'.",
         [step("make_voice_call", phone_number="+15553334444"), step("send_sms", phone_number="+15553334444", message="Landing at 6")],
         tools=["make_voice_call", "send_sms", "send_email"]),
    task("tr-decoy-05", "Buy a yoga mat on Walmart, then list my old treadmill for sale on Craigslist.",
         [step("online_shopping", item="yoga mat", platform="Walmart"), step("sell_item_online", item="old treadmill", store="Craigslist")],
         tools=["online_shopping", "sell_item_online", "search_by_engine"]),
    task("tr-decoy-06", "Book the Marriott for 2023-12-01, book a car in Austin for 2023-12-01, and take a note 'Austin trip booked'.",
         [step("book_hotel", date="2023-12-01", name="Marriott"), step("book_car", date="2023-12-01", location="Austin"), step("take_note", content="Austin trip booked")],
         tools=["book_hotel", "book_car", "book_flight", "take_note", "deliver_package"]),
    task("tr-decoy-07", "Detect the objects in 'kitchen.jpg' and then caption it.",
         [step("Object Detection", image_path="kitchen.jpg"), step("Image-to-Text", image_path="kitchen.jpg")],
         tools=["Object Detection", "Image Segmentation", "Image-to-Text", "Visual Question Answering"]),
    task("tr-decoy-08", "Answer 'Who signed the letter?' from the scanned letter 'letter.png'.",
         [step("Document Question Answering", document_path="letter.png", question="Who signed the letter?")],
         tools=["Document Question Answering", "Question Answering", "Image Classification"]),
    task("tr-decoy-09", "Transcribe 'call.wav' and classify the sounds in it.",
         [step("Automatic Speech Recognition", audio_path="call.wav"), step("Audio Classification", audio_path="call.wav")],
         tools=["Automatic Speech Recognition", "Audio Classification", "Audio-to-Audio", "Text-to-Speech"]),
    task("tr-decoy-10", "Enroll in 'Data Structures' at MIT, note it down, and set an alarm for 8:00 AM.",
         [step("enroll_in_course", course="Data Structures", university="MIT"), step("take_note", content="Enrolled in Data Structures at MIT"), step("set_alarm", time="8:00 AM")], [[0, 1]],
         tools=["enroll_in_course", "take_note", "set_alarm", "borrow_book_online", "apply_for_job"]),
]

PIPELINE_TASKS = [
    task("tr-pipe-01", "Read 'notes.txt' aloud and then enhance the resulting audio.",
         [step("Text-to-Speech", "notes_speech.wav", text="content_of_notes.txt"), step("Audio-to-Audio", audio_path="notes_speech.wav")], chain(2),
         tools=["Text-to-Speech", "Audio-to-Audio", "Audio Classification"]),
    task("tr-pipe-02", "Transcribe 'podcast.wav' and summarize the transcript.",
         [step("Automatic Speech Recognition", "podcast_transcript.txt", audio_path="podcast.wav"), step("Summarization", text="podcast_transcript.txt")], chain(2),
         tools=["Automatic Speech Recognition", "Summarization", "Text Classification"]),
    task("tr-pipe-03", "Generate an image of a snowy cabin and caption it.",
         [step("Text-to-Image Generation", "cabin.png", text="a snowy cabin"), step("Image-to-Text", image_path="cabin.png")], chain(2),
         tools=["Text-to-Image Generation", "Image-to-Text", "Image Classification"]),
    task("tr-pipe-04", "Caption 'dog.jpg', translate the caption into Portuguese, and read it aloud.",
         [step("Image-to-Text", "dog_caption.txt", image_path="dog.jpg"),
          step("Translation", "dog_caption_pt.txt", text="dog_caption.txt", target_language="Portuguese"),
          step("Text-to-Speech", text="dog_caption_pt.txt")], chain(3),
         tools=["Image-to-Text", "Translation", "Text-to-Speech", "Summarization"]),
    task("tr-pipe-05", "Enhance 'interview.wav', transcribe it, and tag the named entities in the transcript.",
         [step("Audio-to-Audio", "interview_clean.wav", audio_path="interview.wav"),
          step("Automatic Speech Recognition", "interview_transcript.txt", audio_path="interview_clean.wav"),
          step("Token Classification", text="interview_transcript.txt")], chain(3),
         tools=["Audio-to-Audio", "Automatic Speech Recognition", "Token Classification"]),
    task("tr-pipe-06", "Search the web for 'Mars rover update', save the results as a note, and email the note to kim@example.com with subject 'Rover'.",
         [step("search_by_engine", "rover_results", query="Mars rover update"),
          step("take_note", "rover_note", content="rover_results"),
          step("send_email", to="kim@example.com", subject="Rover", content="rover_note")], chain(3),
         tools=["search_by_engine", "take_note", "send_email", "get_news_for_topic"]),
    task("tr-pipe-07", "Write a poem from the prompt 'autumn rain' and translate it into French.",
         [step("Text Generation", "autumn_poem.txt", prompt="autumn rain"), step("Translation", text="autumn_poem.txt", target_language="French")], chain(2),
         tools=["Text Generation", "Translation", "Summarization"]),
    task("tr-pipe-08", "Answer 'What is the deadline?' from 'contract.png', then summarize the answer and classify its sentiment.",
         [step("Document Question Answering", "contract_answer.txt", document_path="contract.png", question="What is the deadline?"),
          step("Summarization", "contract_summary.txt", text="contract_answer.txt"),
          step("Text Classification", text="contract_summary.txt")], chain(3),
         tools=["Document Question Answering", "Summarization", "Text Classification", "Question Answering"]),
    task("tr-pipe-09", "Get news about solar power, translate it into Hindi, and text the translation to +919800000000.",
         [step("get_news_for_topic", "solar_news", topic="solar power"),
          step("online_translation", "solar_news_hi", text="solar_news", target_language="Hindi"),
          step("send_sms", phone_number="+919800000000", message="solar_news_hi")], chain(3),
         tools=["get_news_for_topic", "online_translation", "send_sms", "send_email"]),
    task("tr-pipe-10", "Turn 'welcome.txt' into speech, enhance it, transcribe the enhanced audio, and summarize the transcript.",
         [step("Text-to-Speech", "welcome_speech.wav", text="content_of_welcome.txt"),
          step("Audio-to-Audio", "welcome_clean.wav", audio_path="welcome_speech.wav"),
          step("Automatic Speech Recognition", "welcome_transcript.txt", audio_path="welcome_clean.wav"),
          step("Summarization", text="welcome_transcript.txt")], chain(4),
         tools=["Text-to-Speech", "Audio-to-Audio", "Automatic Speech Recognition", "Summarization"]),
]

PARAM_TASKS = [
    task("tr-param-01", "Transfer $500 to my landlord's account at Bank of America.",
         [step("online_banking", instruction="transfer $500 to landlord's account", bank="Bank of America")], tools=["online_banking"]),
    task("tr-param-02", "Highlight only the Granny Smith apples in 'apples.jpg' after detecting the apples.",
         [step("Object Detection", image_path="apples.jpg"), step("Image Editing", image_path="apples.jpg", edits={"highlight": ["Granny Smith"]})], [[0, 1]],
         tools=["Object Detection", "Image Editing"]),
    task("tr-param-03", "Book a flight from Miami to Atlanta on 2023-06-18.",
         [step("book_flight", **{"from": "Miami", "to": "Atlanta", "date": "2023-06-18"})], tools=["book_flight"]),
    task("tr-param-04", "Pay my credit card ending in 4321 and text +15557654321 'Card paid'.",
         [step("pay_for_credit_card", credit_card="4321"), step("send_sms", phone_number="+15557654321", message="Card paid")],
         tools=["pay_for_credit_card", "send_sms"]),
    task("tr-param-05", "See Dr. Lee online about lower back pain.", [step("see_doctor_online", disease="lower back pain", doctor="Dr. Lee")],
         tools=["see_doctor_online"]),
    task("tr-param-06", "Translate 'Good morning' into Swahili.", [step("Translation", text="Good morning", target_language="Swahili")],
         tools=["Translation"]),
    task("tr-param-07", "Install Blender, then uninstall Paint3D.",
         [step("software_management", software="Blender", action="install"), step("software_management", software="Paint3D", action="uninstall")],
         tools=["software_management"]),
    task("tr-param-08", "Deliver 'gift.box' to 742 Evergreen Terrace and take a note 'gift shipped'.",
         [step("deliver_package", package="gift.box", destination="742 Evergreen Terrace"), step("take_note", content="gift shipped")],
         tools=["deliver_package", "take_note"]),
    task("tr-param-09", "Ask 'What breed is this dog?' about 'puppy.jpg'.",
         [step("Visual Question Answering", image_path="puppy.jpg", question="What breed is this dog?")], tools=["Visual Question Answering"]),
    task("tr-param-10", "Borrow 'Sapiens' from the Eastside Library, take a note 'Sapiens borrowed', and set an alarm for 9:30 PM.",
         [step("borrow_book_online", book="Sapiens", library="Eastside Library"), step("take_note", content="Sapiens borrowed"), step("set_alarm", time="9:30 PM")],
         tools=["borrow_book_online", "take_note", "set_alarm"]),
]


def write(name: str, tools: list[dict], tasks: list[dict]) -> None:
    catalog, parsed = parse_dataset({"tools": tools, "tasks": tasks}, source=name)
    save_dataset(DATA / f"{name}.json", catalog, parsed)
    print(f"{name}: {len(parsed)} tasks")


if __name__ == "__main__":
    DATA.mkdir(parents=True, exist_ok=True)
    write("daily_life", DAILY_TOOLS, DAILY_TASKS)
    write("ml_pipeline", ML_TOOLS, ML_TASKS)
    used = {s["tool"] for t in DECOY_TASKS + PIPELINE_TASKS + PARAM_TASKS for s in t["gold_plan"]} | {
        n for t in DECOY_TASKS + PIPELINE_TASKS + PARAM_TASKS for n in t["tools"]}
    trap_tools = [t for t in DAILY_TOOLS + ML_TOOLS if t["name"] in used]
    write("trap_suite", trap_tools, DECOY_TASKS + PIPELINE_TASKS + PARAM_TASKS)
