#include "graphictown/prompts.hpp"

namespace gtown {

namespace {

constexpr std::string_view k_outline = R"PT(Task: You are a proficient planner. Your task is to analyze the user's request and image file(s), identify the relevant design choices, and create a design outline in a JSON list format.

User request: {user request}
User image file(s): {user image files}

**** Output Format ***
{
    "user_request": "Provide a brief summary of the user request.",
    "design_choices": {
        "background_color": "Identify the background color or style.",
        "text": {
            "content": "Specify the exact wording for each text to be included.",
            "position": "Identify the position of each text.",
            "color": "Identify the color of each text.",
            "size": "Identify the font size, either as an exact number or a description."
        },
        "image": {
            "content": "Specify the URL and caption for each image to be included in the design.",
            "position": "Identify the position of each image.",
            "size": "Identify the size of each image, either as exact dimensions or a description."
        }
    }
}

*** Key Requirements ***
- If there is any missing information from the user request, try to infer from the given information.
- Output should be in a list of JSON objects format.
- Do NOT include further explanation other than the JSON list.
- Be as concise and brief as possible.

Design Outline:
)PT";

constexpr std::string_view k_recruitment = R"PT(Task: Your task is to recruit the necessary experts to complete a design outlined in the user request. Create a recruitment status in JSON list format.

User request: {user request}
User image file(s): {user image files}

You can recruit from the three experts with the following profiles:
- Photo Editor
  - Job Responsibilities:
    - Image editing: Cropping, adjusting composition, correcting lighting, and retouching images or illustrations.
    - Color correction: Adjusting brightness and contrast or adjusting hue and saturation.
    - Apply filters: Apply different filters (e.g., photo, glass, ocean ripple, watercolor) to images.

- Vector Graphic Editor
  - Job Responsibilities:
    - Draw shapes: Drawing simple shapes (circle, polygon, square, star) on canvas.

- Layout Designer
  - Job Responsibilities:
    - Customize layout templates: Create grid systems for books, brochures, cards, and magazines to organize the layout.
    - Export files: Export documents to any format, in print or digital.
    - Combine text and visual elements: Combine visual elements from other apps with text into a completed design.
*** Output Format ***
Each object in the JSON list should follow:
{
    "expert": "Name of the expert (Photo Editor, Vector Graphic Editor, Layout Desinger).",
    "task": "High-level task that can be performed by the expert."
}
*** Example Starts ***
[
    {"expert": "Photo Editor", "task": "Add the provided images to create a deep purple night sky background with a large dreamy moon centered, surrounded by small twinkling stars spread across the top half of the cover."}, 
    {"expert": "Layout Designer", "task": "Combine the edited image with the title 'Moonlit Fantasies', the author name 'J.K. Stellar', and the tagline 'A Journey Through the Night Sky.' to create the book cover design."}
]
*** Example Ends ***

**** Key Requirements ***
- Only recruit each expert one.
- The name of the expert must match those in the expert profiles.
- For task description, explain how the expert can contribute towards the final product. Summarize in one sentence.
- In order to achieve the task in the design outline, experts should work together and their task will be dependent to each other. Arrange in the order of which expert should finish first.
- Output should be in a list of JSON objects format.
- Do NOT include further explanation other than in the JSON list.
- Be as concise and brief as possible.

Recruitment status:
)PT";

constexpr std::string_view k_expert_plan = R"PT(Task: You are a proficient {expert}. You are recruited to collaborate on a design project with other experts.

The design choices collected from the user have been compiled into the following design outline. Use as reference:
{design outline}

You are assigned to complete the following task as in the design outline: {task}. Please plan a sequence of detailed, low-level subtasks required to accomplish this task and output them as a JSON list.

**** Output Format ***
Each object in the JSON list should follow:
{
    "id": "ID of the subtask, starting from 1.",
    "expert": "Name of the expert.",
    "description": "Description of the subtask in one sentence."
}
*** Example Starts ***
[
    {"id": 1, "expert": "Photo Editor", "description": "Create a new document with book cover dimensions."},
    {"id": 2, "expert": "Photo Editor", "description": "Set the background color to light pink."},
    {"id": 3, "expert": "Photo Editor", "description": "Import the pink moonlit image from 'static/pink_moonlit.png'."},
    {"id": 4, "expert": "Photo Editor", "description": "Resize the pink moonlit image to medium size, covering the bottom part of the document."},
    {"id": 5, "expert": "Photo Editor", "description": "Reposition the pink moonlit image to the bottom-center of the document."},
    {"id": 6, "expert": "Photo Editor", "description": "Import the couple silhouette illustration from 'static/couple_silhouette.png'."},
    {"id": 7, "expert": "Photo Editor", "description": "Resize the couple silhouette illustration to span across the lower half of the cover."},
    {"id": 8, "expert": "Photo Editor", "description": "Reposition the couple silhouette illustration to be centered in the bottom-middle part."},
    {"id": 9, "expert": "Photo Editor", "description": "Adjust the background colors to match the light pink moonlit theme."},
    {"id": 10, "expert": "Photo Editor", "description": "Save the document in a psd format suitable for further editing by the Layout Designer."},
]
*** Example Ends ***

**** Key Requirements ***
- First step should always be creating a new document and the last step should always be saving the document in appropriate file format.
- Use the exact image URLs the user provided when importing images.
- Do not include very basic operations such as opening the software or closing the software.
- Do not include new expert in the plan.
- Output should be in a list of JSON objects format.
- Do NOT include further explanation other than in the JSON list.
- Be as concise and brief as possible.

Sequence of subtasks:
)PT";

constexpr std::string_view k_supervision = R"PT(Task: You are the supervisor of a design project that requires collaboration among various design experts.

The following experts have been recruited for the project. Use as reference:
{recruitment status}

Each expert has submitted their proposed workflow plans:
{workflow plans}

Your task is to combine these proposed workflow plans into a cohesive sequence of tasks in a JSON list format.

**** Output Format ***
Each object in the JSON list should follow:
{
    "id": "ID of the subtask, starting from 1.",
    "expert": "Name of the expert.",
    "description": "Description of the subtask in one sentence."
}
*** Example Starts ***
[
    {"id": 1, "expert": "Photo Editor", "description": "Create a new document with book cover dimensions."},
    {"id": 2, "expert": "Photo Editor", "description": "Set the background color to light pink."},
    ...
    {"id": 11, "expert": "Layout Designer", "description": "Create a new document with book cover dimensions."},
    {"id": 12, "expert": "Layout Designer", "description": "Import the edited image from the Photo Editor: 'moonlit_illustration_edited.psd'."},
    {"id": 13, "expert": "Layout Designer", "description": "Resize the edited image to cover the entire document."},
    {"id": 14, "expert": "Layout Designer", "description": "Create text for the title 'LOVE\nSTORY'."},
    {"id": 15, "expert": "Layout Designer", "description": "Apply the Andale Mono font to the title text."},
    ...
    {"id": 31, "expert": "Layout Designer", "description": "Reposition the tagline text above the title."},
    {"id": 32, "expert": "Layout Designer", "description": "Export the final book cover design as a PDF file."}
]
*** Example Ends ***

**** Key Requirements ***
- Do NOT repeat any steps that are already completed in previous step.
- For each expert, first step should always be creating a new document and the last step should always be saving the document in appropriate file format.
- When switching experts, use the output from the previous expert as input for the next.
- Once an expert is used and switched to another expert, it should not be used again.
- You should output only one list of workflow plan.
- Start the id from 1 to the number of steps in the workflow.
- Arrange each subtask in a chronological order.
- Output should be in a list of JSON objects format.
- Do NOT include further explanation other than in the JSON list.
- Be as concise and brief as possible.

Supervised sequence of subtasks:
)PT";

constexpr std::string_view k_retrieval = R"PT(Task: You are a proficient {expert}. You are recruited to collaborate on a design project with other experts. Use your available list of actions to map each step in the sequence of subtasks to an action.

Sequence of subtasks: {workflow plan}

Your available actions are as below:
{list of actions}

**** Output Format ***
Each object in the JSON list should follow:
{
    "id": "ID of the subtask, starting from 1.",
    "expert": "Name of the expert.",
    "description": "Description of the subtask in one sentence.",
    "action": "Name of the mapped action.",
    "parameters": "Dictionary of parameter keys and corresponding values."
}
*** Example Starts ***
[
    {"id": 1, "expert": "Photo Editor", "description": "Create a new document with book cover dimensions.", "skill": "CreateDocument", "parameters": {"docType": "book cover"}},
    {"id": 2, "expert": "Photo Editor", "description": "Set the background color to light pink.", "skill": "SetBackgroundColor", "parameters": {"red": 255, "green": 179, "blue": 238}},
    ...
    {"id": 8, "expert": "Photo Editor", "description": "Reposition the couple silhouette illustration to be centered in the bottom-middle part.", "parameters": {"layerName": "SilhouetteLayer", "posX": 267, "posY": 1052}},
    {"id": 9, "expert": "Photo Editor", "description": "Adjust the background colors to match the light pink moonlit theme.", "skill": "AdjustHSL", "parameters": {"layerName": "MoonlitLayer", "hue": 18, "saturation": -18, "light": 0}},
    {"id": 10, "expert": "Photo Editor", "description": "Save the document in a format suitable for further editing by the Layout Designer.", "skill": "SaveDocument", "parameters": {"fileName": "moonlit_illustration_edited", "format": "psd"}},
]
*** Example Ends ***

**** Key Requirements ***
- For any file name that appears in the design outline, use exact file names in your sequence of subtasks.
- Each step should only be mapped to one action. If a step of the workflow is not able to be mapped to one action, it means the step can be decomposed further into multiple steps. You can reformat, reorder, add, edit steps of the workflow if needed to be directly mapped to actions.
- Each step should have an action and a dictionary of parameter values.
- For layerName, try to name it as to end as Layer (e.g., BackgroundLayer, TitleLayer).
- For detailed numeric values (e.g., height, width, x-axis position, y-axis position), consider the document's dimensions, imagine, and propose a likely value.
- Arrange each subtask in a chronological order.
- Output should be in a list of JSON objects format.
- Do NOT include further explanation other than in the JSON list.
- Be as concise and brief as possible.

Sequence of subtasks:
)PT";

constexpr std::string_view k_judge_color = R"PT(Task: Evaluate if the workflow plan (1) correctly applies the background color and (2) the background and the text color are contrasting. Return a score between 1 to 5 according to the scoring rubric.

Background color: {background color}
Text elements: {text}
Workflow plan: {workflow plan}

**** Scoring Rubric ***
- 1: Workflow plan fails to reflect all of the color constraints specified.
- 3: Workflow plan reflects approximately half of the color constraints specified.
- 5: Workflow plan reflects all of the color constraints specified.

Score should strictly be a number between 1 to 5. Do not include any further explanation other than the score.
Score:
)PT";

constexpr std::string_view k_judge_text = R"PT(Task: Evaluate if the workflow plan adequately applies the text elements (e.g., title, tagline) specified. Return a score between 1 to 5 according to the scoring rubric.

Text elements: {text}
Workflow plan: {workflow plan}

**** Scoring Rubric ***
- 1: Workflow plan fails to reflect all of the text elements specified.
- 3: Workflow plan reflects approximately half of the text elements specified.
- 5: Workflow plan reflects all of the text elements specified.

Score should strictly be a number between 1 to 5. Do not include any further explanation other than the score.
Score:
)PT";

constexpr std::string_view k_judge_image = R"PT(Task: Evaluate if the workflow plan adequately applies the image elements (e.g., size, position) specified. Return a score between 1 to 5 according to the scoring rubric.

Image elements: {image}
Workflow plan: {workflow plan}

**** Scoring Rubric ***
- 1: Workflow plan fails to reflect all of the image elements specified.
- 3: Workflow plan reflects approximately half of the image elements specified.
- 5: Workflow plan reflects all of the image elements specified.

Score should strictly be a number between 1 to 5. Do not include any further explanation other than the score.
Score:
)PT";

constexpr std::string_view k_vqa = R"PT(Instruction: Look at the image and answer the question with 'Yes' or 'No'.

Question: {question}
Answer:
)PT";

constexpr std::string_view k_originality = R"PT(Instruction: Evaluate the originality of the image generated based on the user query. Originality measures the uniqueness of the ideas generated. Original ideas are those that are rare or unconventional, differing from the norm. Return a score between 1 to 5 according to the scoring rubric.

User query: {user query}

**** Scoring Rubric ***
- 1: Image is highly conventional and predictable. No significant signs of creative thinking is shown.
- 2: Image shows minimal originality and mostly align with typical or common responses. Few novel elements are present.
- 3: Image is somewhat original, with a mix of conventional and unique elements.
- 4: Image is noticeable original and uncommon. It shows creative thinking and depart meaningfully from conventional norms.
- 5: Image is highly unique, rare, and stand out as unconventional. They demonstrate a strong departure from typical or expected approaches.

Score should strictly be a number between 1 to 5. Do not include any further explanation other than the score.
Score:
)PT";

constexpr std::string_view k_elaboration = R"PT(Instruction: Evaluate the elaboration of the image generated based on the user query. Elaboration refers to the ability to expand upon, refine, and embellish an idea. It involves adding details, developing nuances, and building upon a basic concept to make it more intricate or complex. Return a score between 1 to 5 according to the scoring rubric.

User query: {user query}

**** Scoring Rubric ***
- 1: Image is presented in a simpler or vague manner with no meaningful development or supporting detail.
- 2: Image is minimally expanded, with few details or refinements added.
- 3: Image includes expansion of some details, but elaboration is somewhat surface-level.
- 4: Image well-expands the user query with several added details and refinements.
- 5: Image thoroughly expands the user query with rich, specific details or refinements added beyond the core concept.

Score should strictly be a number between 1 to 5. Do not include any further explanation other than the score.
Score:
)PT";

constexpr PromptTemplate kTemplates[] = {
    {"outline", k_outline},
    {"recruitment", k_recruitment},
    {"expert_plan", k_expert_plan},
    {"supervision", k_supervision},
    {"retrieval", k_retrieval},
    {"judge_color", k_judge_color},
    {"judge_text", k_judge_text},
    {"judge_image", k_judge_image},
    {"vqa", k_vqa},
    {"originality", k_originality},
    {"elaboration", k_elaboration},
};

}  // namespace

std::span<const PromptTemplate> prompt_templates() { return kTemplates; }

}  // namespace gtown
